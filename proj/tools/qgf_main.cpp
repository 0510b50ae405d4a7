#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgf/errors.hpp"
#include "qgf/experiment.hpp"
#include "qgf/presets.hpp"
#include "qgf/self_check.hpp"
#include "qgf/spectrum.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

qgf::ExperimentConfig load_config(const std::string& path) {
  if (ends_with(path, ".json")) return qgf::config_from_manifest(path);
  return qgf::config_from_toml(path);
}

// precedence: --out flag, then QGF_OUTPUT_DIR, then the config value
void apply_output_dir(qgf::ExperimentConfig& cfg, const std::string& out_flag) {
  if (!out_flag.empty()) {
    cfg.output_dir = out_flag;
    return;
  }
  const char* env = std::getenv("QGF_OUTPUT_DIR");
  if (env && *env) cfg.output_dir = env;
}

void print_result(const qgf::ExperimentResult& r) {
  const qgf::AggregateRow& last = r.aggregate.back();
  std::printf("%s: %d/%d seeds retained, final energy %.6f +- %.6f, final fidelity %.6f\n",
              r.config.run_name.c_str(), static_cast<int>(r.retained.size()), r.config.n_seeds,
              last.energy_mean, last.energy_std, last.fidelity_mean);
  std::printf("  wrote %s\n", r.aggregate_csv.string().c_str());
  std::printf("  wrote %s\n", r.per_seed_csv.string().c_str());
  if (!r.iteration_csv.empty()) std::printf("  wrote %s\n", r.iteration_csv.string().c_str());
  std::printf("  wrote %s\n", r.manifest_path.string().c_str());
}

int cmd_run(const std::string& config_path, const std::string& out_flag) {
  qgf::ExperimentConfig cfg = load_config(config_path);
  apply_output_dir(cfg, out_flag);
  print_result(qgf::run_experiment(cfg));
  return 0;
}

int cmd_preset(const std::string& name, const std::string& out_flag, int seeds_flag,
               long long base_seed_flag) {
  qgf::PresetOverrides ov;
  if (seeds_flag > 0) ov.n_seeds = seeds_flag;
  if (base_seed_flag >= 0) ov.base_seed = static_cast<uint64_t>(base_seed_flag);
  if (!out_flag.empty()) {
    ov.output_dir = out_flag;
  } else {
    const char* env = std::getenv("QGF_OUTPUT_DIR");
    if (env && *env) ov.output_dir = env;
  }
  std::vector<qgf::ExperimentConfig> legs = qgf::preset_configs(name, ov);
  for (const qgf::ExperimentConfig& leg : legs) print_result(qgf::run_experiment(leg));
  return 0;
}

int cmd_oracle(const std::string& config_path) {
  qgf::ExperimentConfig cfg = load_config(config_path);
  qgf::PauliSumHamiltonian h = qgf::build_tfim(cfg.model);
  qgf::Spectrum sp = qgf::diagonalize(h);
  ordered_json j;
  j["model"] = {{"n_qubits", cfg.model.n_qubits},
                {"j", cfg.model.j},
                {"g", cfg.model.g},
                {"shift", cfg.model.shift}};
  j["ground_energy"] = sp.ground_energy();
  j["ground_degeneracy"] = sp.ground_degeneracy();
  j["max_abs_eigenvalue"] = sp.max_abs_eigenvalue();
  j["eigenvalues"] = sp.eigenvalues();
  std::printf("%s\n", j.dump(2).c_str());
  return 0;
}

int cmd_check() {
  bool ok = qgf::run_self_checks([](const std::string& name, bool passed) {
    std::printf("[%s] %s\n", passed ? "ok" : "FAIL", name.c_str());
  });
  std::printf(ok ? "all checks passed\n" : "some checks FAILED\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transverse-field Ising ground-state search with a quantum Gaussian filter"};
  app.require_subcommand(1);

  std::string run_config, run_out;
  CLI::App* run = app.add_subcommand("run", "run one experiment from a TOML config or JSON manifest");
  run->add_option("--config", run_config, "config file (.toml) or manifest (.json)")->required();
  run->add_option("--out", run_out, "output directory (overrides config and QGF_OUTPUT_DIR)");

  std::string preset_name, preset_out;
  int preset_seeds = 0;
  long long preset_base_seed = -1;
  CLI::App* preset = app.add_subcommand("preset", "run a canned experiment batch");
  preset->add_option("name", preset_name, "one of: fig2, fig3, fig4")->required();
  preset->add_option("--out", preset_out, "output directory (overrides QGF_OUTPUT_DIR)");
  preset->add_option("--seeds", preset_seeds, "override the number of seeds per leg");
  preset->add_option("--base-seed", preset_base_seed, "override the base seed of every leg");

  std::string oracle_config;
  CLI::App* oracle = app.add_subcommand("oracle", "print the exact spectrum for a config's model");
  oracle->add_option("--config", oracle_config, "config file (.toml) or manifest (.json)")->required();

  CLI::App* check = app.add_subcommand("check", "run the fast invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_config, run_out);
    if (preset->parsed()) return cmd_preset(preset_name, preset_out, preset_seeds, preset_base_seed);
    if (oracle->parsed()) return cmd_oracle(oracle_config);
    if (check->parsed()) return cmd_check();
  } catch (const qgf::Error& e) {
    ordered_json j;
    j["category"] = e.category();
    j["message"] = e.what();
    std::fprintf(stderr, "%s\n", j.dump().c_str());
    return e.exit_code();
  } catch (const std::exception& e) {
    ordered_json j;
    j["category"] = "internal-error";
    j["message"] = e.what();
    std::fprintf(stderr, "%s\n", j.dump().c_str());
    return 1;
  }
  return 0;
}
