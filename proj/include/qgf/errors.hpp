#pragma once
#include <stdexcept>
#include <string>

namespace qgf {

// Error taxonomy. category() is the machine-readable string the CLI prints;
// exit_code() is its process exit status.
class Error : public std::runtime_error {
public:
  Error(std::string category, const std::string& msg, int exit_code)
      : std::runtime_error(msg), category_(std::move(category)), exit_code_(exit_code) {}
  const std::string& category() const { return category_; }
  int exit_code() const { return exit_code_; }

private:
  std::string category_;
  int exit_code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error("config-error", m, 2) {}
};
struct DimensionError : Error {
  explicit DimensionError(const std::string& m) : Error("dimension-error", m, 3) {}
};
struct ParameterError : Error {
  explicit ParameterError(const std::string& m) : Error("parameter-error", m, 4) {}
};
struct DegenerateStateError : Error {
  explicit DegenerateStateError(const std::string& m) : Error("degenerate-state-error", m, 5) {}
};
struct StepSizeError : Error {
  explicit StepSizeError(const std::string& m) : Error("step-size-error", m, 6) {}
};
struct IllPosedUpdateError : Error {
  explicit IllPosedUpdateError(const std::string& m) : Error("ill-posed-update-error", m, 7) {}
};
struct AggregationError : Error {
  explicit AggregationError(const std::string& m) : Error("aggregation-error", m, 8) {}
};
struct IoError : Error {
  explicit IoError(const std::string& m) : Error("io-error", m, 9) {}
};

}  // namespace qgf
