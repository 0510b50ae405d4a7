#include "qgf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "qgf/errors.hpp"
#include "qgf/toml_lite.hpp"

namespace qgf {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string optimizer_name(Optimizer o) {
  switch (o) {
    case Optimizer::gradient_descent: return "gradient_descent";
    case Optimizer::adam: return "adam";
    case Optimizer::mclachlan: return "mclachlan";
    case Optimizer::bfgs: return "bfgs";
  }
  throw ConfigError("unknown optimizer value");
}

Optimizer optimizer_from_name(const std::string& s) {
  if (s == "gradient_descent") return Optimizer::gradient_descent;
  if (s == "adam") return Optimizer::adam;
  if (s == "mclachlan") return Optimizer::mclachlan;
  if (s == "bfgs") return Optimizer::bfgs;
  throw ConfigError("unknown optimizer '" + s +
                    "' (expected gradient_descent, adam, mclachlan, or bfgs)");
}

std::string method_name(Method m) {
  return m == Method::qgf ? "qgf" : "baseline_vqe";
}

Method method_from_name(const std::string& s) {
  if (s == "qgf") return Method::qgf;
  if (s == "baseline_vqe") return Method::baseline_vqe;
  throw ConfigError("unknown method '" + s + "' (expected qgf or baseline_vqe)");
}

std::string init_mode_name(InitMode m) {
  return m == InitMode::random_uniform ? "random_uniform" : "zeros_perturbed";
}

InitMode init_mode_from_name(const std::string& s) {
  if (s == "random_uniform") return InitMode::random_uniform;
  if (s == "zeros_perturbed") return InitMode::zeros_perturbed;
  throw ConfigError("unknown init_mode '" + s +
                    "' (expected random_uniform or zeros_perturbed)");
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

void validate(const ExperimentConfig& cfg) {
  validate(cfg.evolution);
  if (cfg.phase != "ferromagnetic" && cfg.phase != "paramagnetic")
    throw ConfigError("phase must be ferromagnetic or paramagnetic, got '" + cfg.phase + "'");
  if (cfg.initial_state != "auto" && cfg.initial_state != "ferromagnetic" &&
      cfg.initial_state != "paramagnetic")
    throw ConfigError("initial_state must be auto, ferromagnetic, or paramagnetic");
  if (cfg.layers < 1) throw ConfigError("layers must be >= 1");
  if (cfg.n_seeds < 1) throw ConfigError("n_seeds must be >= 1");
  if (!(cfg.perturbation_scale > 0.0))
    throw ConfigError("perturbation_scale must be > 0");
  if (!(cfg.outlier_rule.iqr_factor >= 0.0))
    throw ConfigError("outlier_rule.iqr_factor must be >= 0");
  if (cfg.run_name.empty()) throw ConfigError("run_name must not be empty");
  if (cfg.run_name.find('/') != std::string::npos || cfg.run_name.find("..") != std::string::npos)
    throw ConfigError("run_name must be a plain file prefix");
  if (cfg.model.n_qubits < 2) throw ConfigError("model needs at least 2 qubits");
  if (cfg.model.n_qubits > 12) throw ConfigError("model limited to 12 qubits");
}

InitialStateKind resolve_initial_state(const ExperimentConfig& cfg) {
  std::string s = cfg.initial_state == "auto" ? cfg.phase : cfg.initial_state;
  return s == "ferromagnetic" ? InitialStateKind::ferromagnetic
                              : InitialStateKind::paramagnetic;
}

// ---------- config I/O ----------

ExperimentConfig config_from_toml_text(const std::string& text) {
  TomlTable t = TomlTable::parse(text);
  ExperimentConfig c;
  c.model.n_qubits = static_cast<int>(t.get_int("model.n_qubits", c.model.n_qubits));
  c.model.j = t.get_double("model.j", c.model.j);
  c.model.g = t.get_double("model.g", c.model.g);
  c.model.shift = t.get_double("model.shift", c.model.shift);
  c.phase = t.get_string("phase", c.phase);
  c.initial_state = t.get_string("initial_state", c.initial_state);
  c.layers = static_cast<int>(t.get_int("layers", c.layers));
  c.method = method_from_name(t.get_string("method", method_name(c.method)));
  c.n_seeds = static_cast<int>(t.get_int("n_seeds", c.n_seeds));
  c.base_seed = t.get_uint64("base_seed", c.base_seed);
  c.init_mode = init_mode_from_name(t.get_string("init_mode", init_mode_name(c.init_mode)));
  c.perturbation_scale = t.get_double("perturbation_scale", c.perturbation_scale);
  c.output_dir = t.get_string("output_dir", c.output_dir);
  c.run_name = t.get_string("run_name", c.run_name);
  EvolutionConfig& e = c.evolution;
  e.dtau = t.get_double("evolution.dtau", e.dtau);
  e.n_steps = static_cast<int>(t.get_int("evolution.n_steps", e.n_steps));
  e.optimizer = optimizer_from_name(t.get_string("evolution.optimizer", optimizer_name(e.optimizer)));
  e.learning_rate = t.get_double("evolution.learning_rate", e.learning_rate);
  e.max_inner_iterations =
      static_cast<int>(t.get_int("evolution.max_inner_iterations", e.max_inner_iterations));
  e.stall_tolerance = t.get_double("evolution.stall_tolerance", e.stall_tolerance);
  e.adam_beta1 = t.get_double("evolution.adam_beta1", e.adam_beta1);
  e.adam_beta2 = t.get_double("evolution.adam_beta2", e.adam_beta2);
  e.adam_epsilon = t.get_double("evolution.adam_epsilon", e.adam_epsilon);
  e.mclachlan_regularization =
      t.get_double("evolution.mclachlan_regularization", e.mclachlan_regularization);
  e.noise_p = t.get_double("evolution.noise_p", e.noise_p);
  e.n_trajectories = static_cast<int>(t.get_int("evolution.n_trajectories", e.n_trajectories));
  e.total_iteration_cap = t.get_int("evolution.total_iteration_cap", e.total_iteration_cap);
  e.log_per_iteration = t.get_bool("evolution.log_per_iteration", e.log_per_iteration);
  c.outlier_rule.enabled = t.get_bool("outlier_rule.enabled", c.outlier_rule.enabled);
  c.outlier_rule.iqr_factor = t.get_double("outlier_rule.iqr_factor", c.outlier_rule.iqr_factor);
  std::set<std::string> unknown = t.unread_keys();
  if (!unknown.empty())
    throw ConfigError("unknown config key '" + *unknown.begin() + "'");
  validate(c);
  return c;
}

ExperimentConfig config_from_toml(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return config_from_toml_text(text);
}

namespace {

ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["model"] = {{"n_qubits", c.model.n_qubits},
                {"j", c.model.j},
                {"g", c.model.g},
                {"shift", c.model.shift}};
  j["phase"] = c.phase;
  j["initial_state"] = c.initial_state;
  j["layers"] = c.layers;
  j["method"] = method_name(c.method);
  j["n_seeds"] = c.n_seeds;
  j["base_seed"] = c.base_seed;
  j["init_mode"] = init_mode_name(c.init_mode);
  j["perturbation_scale"] = c.perturbation_scale;
  j["output_dir"] = c.output_dir;
  j["run_name"] = c.run_name;
  const EvolutionConfig& e = c.evolution;
  j["evolution"] = {{"dtau", e.dtau},
                    {"n_steps", e.n_steps},
                    {"optimizer", optimizer_name(e.optimizer)},
                    {"learning_rate", e.learning_rate},
                    {"max_inner_iterations", e.max_inner_iterations},
                    {"stall_tolerance", e.stall_tolerance},
                    {"adam_beta1", e.adam_beta1},
                    {"adam_beta2", e.adam_beta2},
                    {"adam_epsilon", e.adam_epsilon},
                    {"mclachlan_regularization", e.mclachlan_regularization},
                    {"noise_p", e.noise_p},
                    {"n_trajectories", e.n_trajectories},
                    {"total_iteration_cap", e.total_iteration_cap},
                    {"log_per_iteration", e.log_per_iteration}};
  j["outlier_rule"] = {{"enabled", c.outlier_rule.enabled},
                       {"iqr_factor", c.outlier_rule.iqr_factor}};
  return j;
}

ExperimentConfig config_from_json(const ordered_json& j) {
  ExperimentConfig c;
  try {
    const auto& m = j.at("model");
    c.model.n_qubits = m.at("n_qubits").get<int>();
    c.model.j = m.at("j").get<double>();
    c.model.g = m.at("g").get<double>();
    c.model.shift = m.at("shift").get<double>();
    c.phase = j.at("phase").get<std::string>();
    c.initial_state = j.at("initial_state").get<std::string>();
    c.layers = j.at("layers").get<int>();
    c.method = method_from_name(j.at("method").get<std::string>());
    c.n_seeds = j.at("n_seeds").get<int>();
    c.base_seed = j.at("base_seed").get<uint64_t>();
    c.init_mode = init_mode_from_name(j.at("init_mode").get<std::string>());
    c.perturbation_scale = j.at("perturbation_scale").get<double>();
    c.output_dir = j.at("output_dir").get<std::string>();
    c.run_name = j.at("run_name").get<std::string>();
    const auto& e = j.at("evolution");
    c.evolution.dtau = e.at("dtau").get<double>();
    c.evolution.n_steps = e.at("n_steps").get<int>();
    c.evolution.optimizer = optimizer_from_name(e.at("optimizer").get<std::string>());
    c.evolution.learning_rate = e.at("learning_rate").get<double>();
    c.evolution.max_inner_iterations = e.at("max_inner_iterations").get<int>();
    c.evolution.stall_tolerance = e.at("stall_tolerance").get<double>();
    c.evolution.adam_beta1 = e.at("adam_beta1").get<double>();
    c.evolution.adam_beta2 = e.at("adam_beta2").get<double>();
    c.evolution.adam_epsilon = e.at("adam_epsilon").get<double>();
    c.evolution.mclachlan_regularization = e.at("mclachlan_regularization").get<double>();
    c.evolution.noise_p = e.at("noise_p").get<double>();
    c.evolution.n_trajectories = e.at("n_trajectories").get<int>();
    c.evolution.total_iteration_cap = e.at("total_iteration_cap").get<long>();
    c.evolution.log_per_iteration = e.at("log_per_iteration").get<bool>();
    c.outlier_rule.enabled = j.at("outlier_rule").at("enabled").get<bool>();
    c.outlier_rule.iqr_factor = j.at("outlier_rule").at("iqr_factor").get<double>();
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("malformed config JSON: ") + ex.what());
  }
  validate(c);
  return c;
}

}  // namespace

std::string manifest_json(const ExperimentConfig& cfg, const std::vector<uint64_t>& seeds,
                          const std::vector<uint64_t>& rejected_seeds,
                          const std::vector<double>& rejected_energies, double threshold,
                          bool has_iteration_csv) {
  ordered_json j;
  j["format"] = "qgf-run/1";
  j["config"] = config_to_json(cfg);
  j["seeds"] = seeds;
  ordered_json outs;
  outs["aggregate"] = cfg.run_name + "_aggregate.csv";
  outs["per_seed"] = cfg.run_name + "_per_seed.csv";
  if (has_iteration_csv) outs["per_iteration"] = cfg.run_name + "_iterations.csv";
  j["outputs"] = outs;
  ordered_json rej = ordered_json::array();
  for (size_t i = 0; i < rejected_seeds.size(); ++i)
    rej.push_back({{"seed", rejected_seeds[i]}, {"final_energy", rejected_energies[i]}});
  j["rejected"] = rej;
  if (!rejected_seeds.empty()) j["rejection_threshold"] = threshold;
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open manifest: " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(f);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + ex.what());
  }
  if (j.contains("format")) {
    if (j.at("format").get<std::string>() != "qgf-run/1")
      throw ConfigError("unsupported manifest format");
    return config_from_json(j.at("config"));
  }
  // plain JSON config (no manifest wrapper)
  return config_from_json(j);
}

// ---------- outliers & aggregation ----------

namespace {

// linear-interpolation quantile on a sorted copy
double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.size() == 1) return v[0];
  double pos = q * static_cast<double>(v.size() - 1);
  size_t lo = static_cast<size_t>(pos);
  if (lo >= v.size() - 1) return v.back();
  double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult res;
  res.config = cfg;

  PauliSumHamiltonian h = build_tfim(cfg.model);
  Spectrum spectrum = diagonalize(h);
  AnsatzSpec spec(cfg.model, cfg.layers, resolve_initial_state(cfg));
  const int m = spec.n_params();

  for (int i = 0; i < cfg.n_seeds; ++i)
    res.seeds.push_back(cfg.base_seed + static_cast<uint64_t>(i));
  res.records.resize(cfg.n_seeds);

  auto run_seed = [&](int i) {
    uint64_t seed = res.seeds[i];
    Rng rng(seed);
    std::vector<double> theta0(m);
    if (cfg.init_mode == InitMode::random_uniform) {
      for (double& t : theta0) t = rng.uniform(-kPi, kPi);
    } else {
      for (double& t : theta0) t = cfg.perturbation_scale * rng.gaussian();
    }
    EvolutionConfig ev = cfg.evolution;
    ev.seed = seed;
    res.records[i] = cfg.method == Method::qgf
                         ? run_qgf_evolution(spec, h, spectrum, ev, theta0, rng)
                         : run_baseline_vqe(spec, h, spectrum, ev, theta0, rng);
  };

  // seeds fan out over a bounded pool; every run owns its rng and record slot,
  // so the output is scheduling-independent
  unsigned pool = std::thread::hardware_concurrency();
  if (pool == 0) pool = 1;
  pool = std::min(pool, static_cast<unsigned>(cfg.n_seeds));
  if (pool <= 1) {
    for (int i = 0; i < cfg.n_seeds; ++i) run_seed(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errs(pool);
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < pool; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (int i = next.fetch_add(1); i < cfg.n_seeds; i = next.fetch_add(1)) run_seed(i);
        } catch (...) {
          errs[w] = std::current_exception();
        }
      });
    }
    for (std::thread& t : workers) t.join();
    for (const std::exception_ptr& e : errs)
      if (e) std::rethrow_exception(e);
  }

  // outlier rule on final-step energies
  std::vector<double> finals;
  for (const TrajectoryRecord& r : res.records) finals.push_back(r.steps.back().energy);
  res.retained.clear();
  if (cfg.outlier_rule.enabled && cfg.n_seeds > 1) {
    double med = quantile(finals, 0.5);
    double iqr = quantile(finals, 0.75) - quantile(finals, 0.25);
    res.outlier_threshold = med + cfg.outlier_rule.iqr_factor * iqr;
    for (int i = 0; i < cfg.n_seeds; ++i) {
      if (finals[i] > res.outlier_threshold) res.rejected.push_back(i);
      else res.retained.push_back(i);
    }
    if (res.retained.empty())
      throw AggregationError("outlier rule rejected every seed (threshold " +
                             format_double(res.outlier_threshold) + ")");
  } else {
    for (int i = 0; i < cfg.n_seeds; ++i) res.retained.push_back(i);
  }

  // per-step aggregate over retained seeds
  size_t max_len = 0;
  for (int i : res.retained) max_len = std::max(max_len, res.records[i].steps.size());
  for (size_t s = 0; s < max_len; ++s) {
    AggregateRow row;
    row.step = static_cast<int>(s);
    row.tau = cfg.method == Method::qgf ? static_cast<double>(s) * cfg.evolution.dtau : 0.0;
    std::vector<double> es, fs;
    for (int i : res.retained) {
      if (s < res.records[i].steps.size()) {
        es.push_back(res.records[i].steps[s].energy);
        fs.push_back(res.records[i].steps[s].fidelity);
      }
    }
    row.retained_n = static_cast<int>(es.size());
    double esum = 0.0, fsum = 0.0;
    for (double e : es) esum += e;
    for (double f : fs) fsum += f;
    row.energy_mean = esum / es.size();
    row.fidelity_mean = fsum / fs.size();
    double var = 0.0;
    if (es.size() > 1) {
      for (double e : es) var += (e - row.energy_mean) * (e - row.energy_mean);
      var /= static_cast<double>(es.size() - 1);  // sample standard deviation
    }
    row.energy_std = std::sqrt(var);
    res.aggregate.push_back(row);
  }

  // per-iteration aggregate (records are already padded to the cap)
  if (cfg.evolution.log_per_iteration) {
    size_t len = 0;
    for (int i : res.retained) len = std::max(len, res.records[i].fidelity_by_iteration.size());
    for (size_t it = 0; it < len; ++it) {
      IterationRow row;
      row.iteration = static_cast<long>(it) + 1;
      double fsum = 0.0, esum = 0.0;
      int n = 0;
      for (int i : res.retained) {
        const auto& fbi = res.records[i].fidelity_by_iteration;
        if (it < fbi.size()) {
          fsum += fbi[it];
          esum += res.records[i].energy_by_iteration[it];
          ++n;
        }
      }
      row.retained_n = n;
      row.fidelity_mean = fsum / n;
      row.energy_mean = esum / n;
      res.iteration_aggregate.push_back(row);
    }
  }

  // ---------- emit files ----------
  namespace fs = std::filesystem;
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.output_dir + "': " + ec.message());

  auto open_out = [&](const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot write " + p.string());
    return f;
  };

  res.aggregate_csv = dir / (cfg.run_name + "_aggregate.csv");
  {
    std::ofstream f = open_out(res.aggregate_csv);
    f << "step,tau,energy_mean,energy_std,fidelity_mean,retained_n\n";
    for (const AggregateRow& r : res.aggregate)
      f << r.step << ',' << format_double(r.tau) << ',' << format_double(r.energy_mean) << ','
        << format_double(r.energy_std) << ',' << format_double(r.fidelity_mean) << ','
        << r.retained_n << '\n';
  }

  res.per_seed_csv = dir / (cfg.run_name + "_per_seed.csv");
  {
    std::ofstream f = open_out(res.per_seed_csv);
    f << "step,tau,seed,energy,fidelity,cost,inner_iterations,stalled\n";
    for (int i = 0; i < cfg.n_seeds; ++i) {
      const TrajectoryRecord& rec = res.records[i];
      for (size_t s = 0; s < rec.steps.size(); ++s) {
        const StepLog& l = rec.steps[s];
        double tau = cfg.method == Method::qgf ? static_cast<double>(s) * cfg.evolution.dtau : 0.0;
        f << s << ',' << format_double(tau) << ',' << res.seeds[i] << ','
          << format_double(l.energy) << ',' << format_double(l.fidelity) << ','
          << format_double(l.cost) << ',' << l.inner_iterations << ',' << (l.stalled ? 1 : 0)
          << '\n';
      }
    }
  }

  if (cfg.evolution.log_per_iteration) {
    res.iteration_csv = dir / (cfg.run_name + "_iterations.csv");
    std::ofstream f = open_out(res.iteration_csv);
    f << "iteration,fidelity_mean,energy_mean,retained_n\n";
    for (const IterationRow& r : res.iteration_aggregate)
      f << r.iteration << ',' << format_double(r.fidelity_mean) << ','
        << format_double(r.energy_mean) << ',' << r.retained_n << '\n';
  }

  res.manifest_path = dir / (cfg.run_name + "_manifest.json");
  {
    std::vector<uint64_t> rejected_seeds;
    std::vector<double> rejected_energies;
    for (int i : res.rejected) {
      rejected_seeds.push_back(res.seeds[i]);
      rejected_energies.push_back(finals[i]);
    }
    std::ofstream f = open_out(res.manifest_path);
    f << manifest_json(cfg, res.seeds, rejected_seeds, rejected_energies, res.outlier_threshold,
                       cfg.evolution.log_per_iteration);
  }

  return res;
}

}  // namespace qgf
