#pragma once
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qgf/engine.hpp"

namespace qgf {

enum class InitMode { random_uniform, zeros_perturbed };
enum class Method { qgf, baseline_vqe };

struct OutlierRule {
  bool enabled = true;
  double iqr_factor = 3.0;
};

struct ExperimentConfig {
  TfimParameters model;
  std::string phase = "ferromagnetic";  // names the leg and picks the default initial state
  // "auto" follows the phase; otherwise "ferromagnetic" / "paramagnetic"
  std::string initial_state = "auto";
  int layers = 4;
  EvolutionConfig evolution;
  Method method = Method::qgf;
  int n_seeds = 1;
  uint64_t base_seed = 1;
  InitMode init_mode = InitMode::random_uniform;
  double perturbation_scale = 1e-3;
  OutlierRule outlier_rule;
  std::string output_dir = "runs";
  std::string run_name = "run";
};

void validate(const ExperimentConfig& cfg);
InitialStateKind resolve_initial_state(const ExperimentConfig& cfg);

ExperimentConfig config_from_toml(const std::string& path);
ExperimentConfig config_from_toml_text(const std::string& text);

// JSON manifest embedding the resolved config and seed list; fully
// deterministic (no timestamps, relative output names).
std::string manifest_json(const ExperimentConfig& cfg, const std::vector<uint64_t>& seeds,
                          const std::vector<uint64_t>& rejected_seeds,
                          const std::vector<double>& rejected_energies, double threshold,
                          bool has_iteration_csv);
ExperimentConfig config_from_manifest(const std::string& path);

struct AggregateRow {
  int step = 0;
  double tau = 0.0;
  double energy_mean = 0.0;
  double energy_std = 0.0;
  double fidelity_mean = 0.0;
  int retained_n = 0;
};

struct IterationRow {
  long iteration = 0;
  double fidelity_mean = 0.0;
  double energy_mean = 0.0;
  int retained_n = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<uint64_t> seeds;
  std::vector<TrajectoryRecord> records;   // one per seed, seed order
  std::vector<int> retained;               // indices into records after outlier filtering
  std::vector<int> rejected;
  double outlier_threshold = 0.0;          // meaningful when any seed was rejected
  std::vector<AggregateRow> aggregate;
  std::vector<IterationRow> iteration_aggregate;  // empty unless log_per_iteration
  std::filesystem::path aggregate_csv;
  std::filesystem::path per_seed_csv;
  std::filesystem::path iteration_csv;  // empty unless log_per_iteration
  std::filesystem::path manifest_path;
};

// Fans the seeds out across a bounded worker pool (each record lands in its
// seed's slot, so the output is scheduling-independent), applies the outlier
// rule to the final-step energies, aggregates, and writes CSVs + manifest.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// formats a double as the shortest round-trip decimal used in every CSV
std::string format_double(double v);

}  // namespace qgf
