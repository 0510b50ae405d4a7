#include "qgf/presets.hpp"

#include "qgf/errors.hpp"

namespace qgf {

namespace {

TfimParameters model_for(const std::string& phase, int n, double shift) {
  // ferromagnetic leg: J=1, g=0.5; paramagnetic leg: J=0.5, g=1
  if (phase == "ferromagnetic") return {n, 1.0, 0.5, shift};
  return {n, 0.5, 1.0, shift};
}

std::vector<ExperimentConfig> fig2() {
  std::vector<ExperimentConfig> out;
  for (int n : {4, 6}) {
    for (const char* phase : {"ferromagnetic", "paramagnetic"}) {
      ExperimentConfig c;
      c.model = model_for(phase, n, 8.5);
      c.phase = phase;
      c.layers = 4;
      c.method = Method::qgf;
      c.evolution.dtau = 0.005;
      c.evolution.n_steps = 30;
      c.evolution.optimizer = Optimizer::bfgs;
      c.evolution.max_inner_iterations = 10;
      c.evolution.stall_tolerance = 1e-9;
      c.n_seeds = 50;
      c.base_seed = 101;
      c.init_mode = InitMode::random_uniform;
      c.output_dir = "runs/fig2";
      c.run_name = std::string("fig2_n") + std::to_string(n) + "_" + phase;
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<ExperimentConfig> fig3() {
  std::vector<ExperimentConfig> out;
  for (const char* phase : {"ferromagnetic", "paramagnetic"}) {
    for (double shift : {4.5, 5.5, 6.5}) {
      ExperimentConfig c;
      c.model = model_for(phase, 4, shift);
      c.phase = phase;
      c.layers = 4;
      c.method = Method::qgf;
      c.evolution.dtau = 0.002;
      c.evolution.n_steps = 75;
      c.evolution.optimizer = Optimizer::mclachlan;
      c.evolution.mclachlan_regularization = 1e-6;
      c.n_seeds = 10;
      c.base_seed = 201;
      c.init_mode = InitMode::random_uniform;
      c.output_dir = "runs/fig3";
      int tenths = static_cast<int>(shift * 10.0 + 0.5);
      c.run_name = std::string("fig3_") + phase + "_shift" + std::to_string(tenths / 10) + "p" +
                   std::to_string(tenths % 10);
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<ExperimentConfig> fig4() {
  std::vector<ExperimentConfig> out;
  for (const char* mode : {"random", "zeros"}) {
    for (const char* method : {"qgf", "baseline"}) {
      ExperimentConfig c;
      c.model = {4, 0.5, 1.0, 11.0};
      c.phase = "paramagnetic";
      c.layers = 4;
      c.evolution.noise_p = 1e-4;
      c.evolution.n_trajectories = 32;
      c.evolution.n_steps = 500;
      c.evolution.total_iteration_cap = 500;
      c.evolution.log_per_iteration = true;
      if (std::string(method) == "qgf") {
        c.method = Method::qgf;
        c.evolution.dtau = 0.005;
        c.evolution.optimizer = Optimizer::bfgs;
        c.evolution.max_inner_iterations = 10;
        c.evolution.stall_tolerance = 0.0;
      } else {
        c.method = Method::baseline_vqe;
        c.evolution.optimizer = Optimizer::gradient_descent;
        c.evolution.learning_rate = 0.01;
      }
      if (std::string(mode) == "random") {
        c.init_mode = InitMode::random_uniform;
      } else {
        c.init_mode = InitMode::zeros_perturbed;
        c.perturbation_scale = 3e-7;
      }
      c.n_seeds = 100;
      c.base_seed = std::string(mode) == "random" ? 301 : 303;
      c.outlier_rule.enabled = true;
      c.outlier_rule.iqr_factor = 3.0;
      c.output_dir = "runs/fig4";
      c.run_name = std::string("fig4_") + method + "_" + mode;
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4"}; }

std::vector<ExperimentConfig> preset_configs(const std::string& name, const PresetOverrides& ov) {
  std::vector<ExperimentConfig> out;
  if (name == "fig2") out = fig2();
  else if (name == "fig3") out = fig3();
  else if (name == "fig4") out = fig4();
  else throw ConfigError("unknown preset '" + name + "' (expected fig2, fig3, or fig4)");
  for (ExperimentConfig& c : out) {
    if (ov.n_seeds) c.n_seeds = *ov.n_seeds;
    if (ov.base_seed) c.base_seed = *ov.base_seed;
    if (ov.output_dir) c.output_dir = *ov.output_dir;
    validate(c);
  }
  return out;
}

}  // namespace qgf
