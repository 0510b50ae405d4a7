#pragma once
#include <optional>
#include <string>
#include <vector>

#include "qgf/experiment.hpp"

namespace qgf {

// Canned experiment batches. Each preset is a list of legs; run them in
// order. Overrides replace the seed count / base seed / output directory in
// every leg.
struct PresetOverrides {
  std::optional<int> n_seeds;
  std::optional<uint64_t> base_seed;
  std::optional<std::string> output_dir;
};

std::vector<ExperimentConfig> preset_configs(const std::string& name,
                                             const PresetOverrides& ov = {});

std::vector<std::string> preset_names();

}  // namespace qgf
