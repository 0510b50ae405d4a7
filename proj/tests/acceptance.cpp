// Acceptance gate: runs the full check list end to end and prints one
// [PASS]/[FAIL] line per criterion with the measured values. Exits nonzero
// when any criterion fails. Heavy presets run at full seed counts, so the
// whole suite takes several minutes.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <Eigen/Dense>

#include "qgf/ansatz.hpp"
#include "qgf/engine.hpp"
#include "qgf/errors.hpp"
#include "qgf/experiment.hpp"
#include "qgf/hamiltonian.hpp"
#include "qgf/noise.hpp"
#include "qgf/presets.hpp"
#include "qgf/rng.hpp"
#include "qgf/spectrum.hpp"
#include "qgf/state_vector.hpp"

using namespace qgf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

fs::path work_dir() {
  static fs::path p = [] {
    fs::path d = fs::temp_directory_path() / "qgf_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// files to replay for the determinism criterion, filled by criteria 4-6
struct RerunSource {
  std::string name;
  fs::path manifest;
  std::vector<fs::path> csvs;
};
std::vector<RerunSource> g_rerun_sources;

void remember_rerun(const std::string& name, const ExperimentResult& res) {
  RerunSource src;
  src.name = name;
  src.manifest = res.manifest_path;
  src.csvs = {res.aggregate_csv, res.per_seed_csv};
  if (!res.iteration_csv.empty()) src.csvs.push_back(res.iteration_csv);
  g_rerun_sources.push_back(std::move(src));
}

// ---------- criterion 1: oracle CLI ground energies ----------

std::string run_cli(const std::string& args, int& exit_code) {
  std::string cmd = std::string(QGF_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw IoError("cannot spawn the cli");
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return out;
}

Outcome criterion_oracle() {
  struct Row {
    int n;
    double shift, expect;
  };
  const Row rows[] = {
      {4, 8.5, 4.228}, {6, 8.5, 2.115}, {4, 4.5, 0.228}, {4, 5.5, 1.228}, {4, 6.5, 2.228}};
  double worst = 0.0;
  for (const Row& r : rows) {
    fs::path cfg = work_dir() / ("oracle_n" + std::to_string(r.n) + "_" +
                                 std::to_string(static_cast<int>(r.shift * 10)) + ".toml");
    std::ofstream f(cfg);
    f << "[model]\nn_qubits = " << r.n << "\nj = 1.0\ng = 0.5\nshift = " << r.shift << "\n";
    f.close();
    int code = 0;
    std::string out = run_cli("oracle --config " + cfg.string(), code);
    if (code != 0) return {false, "cli exit code " + std::to_string(code)};
    double ge = nlohmann::json::parse(out).at("ground_energy").get<double>();
    double dev = std::abs(ge - r.expect);
    worst = std::max(worst, dev);
    if (dev > 0.005)
      return {false, "N=" + std::to_string(r.n) + " shift " + fmt("%.1f", r.shift) +
                         " reported " + fmt("%.6f", ge) + ", expected " + fmt("%.3f", r.expect) +
                         " within 0.005"};
  }
  return {true, "5 models, max deviation " + fmt("%.2e", worst) + " (gate 0.005)"};
}

// ---------- criterion 2: exact filter monotonicity ----------

Outcome criterion_filter_monotone() {
  double worst_fid_drop = 0.0, worst_energy_rise = 0.0;
  for (bool ferro_model : {true, false}) {
    TfimParameters model =
        ferro_model ? TfimParameters{4, 1.0, 0.5, 8.5} : TfimParameters{4, 0.5, 1.0, 8.5};
    PauliSumHamiltonian h = build_tfim(model);
    Spectrum sp = diagonalize(h);
    for (InitialStateKind kind :
         {InitialStateKind::ferromagnetic, InitialStateKind::paramagnetic}) {
      StateVector psi0 = initial_state(kind, 4);
      double prev_fid = -1.0, prev_energy = 1e300;
      for (int k = 0; k <= 30; ++k) {
        double tau = 0.005 * k;
        StateVector s = exact_filter_state(sp, psi0, tau);
        double fid = sp.fidelity_to_ground(s);
        double energy = expectation(h, s);
        if (k > 0) {
          worst_fid_drop = std::max(worst_fid_drop, prev_fid - fid);
          worst_energy_rise = std::max(worst_energy_rise, energy - prev_energy);
        }
        prev_fid = fid;
        prev_energy = energy;
      }
    }
  }
  bool pass = worst_fid_drop <= 1e-10 && worst_energy_rise <= 1e-10;
  return {pass, "4 phase/init combos over 31 tau points; worst fidelity drop " +
                    fmt("%.2e", worst_fid_drop) + ", worst energy rise " +
                    fmt("%.2e", worst_energy_rise) + " (gate 1e-10)"};
}

// ---------- criterion 3: linearized-step convergence ----------

Outcome criterion_linearized_convergence() {
  TfimParameters model{4, 1.0, 0.5, 8.5};
  PauliSumHamiltonian h = build_tfim(model);
  Spectrum sp = diagonalize(h);
  StateVector psi0 = initial_state(InitialStateKind::ferromagnetic, 4);
  StateVector target = exact_filter_state(sp, psi0, 0.15);

  auto infidelity_at = [&](double dtau) {
    StateVector s = psi0;
    int steps = static_cast<int>(std::lround(0.15 / dtau));
    for (int k = 0; k < steps; ++k) s = exact_linearized_step(sp, s, dtau);
    return 1.0 - fidelity_pure(s, target);
  };
  double i1 = infidelity_at(0.005);
  double i2 = infidelity_at(0.0025);
  double ratio = i1 / i2;
  // infidelity is quadratic in the step defect, so the halving factor is
  // gated on the amplitude-level ratio sqrt(i1/i2); the raw infidelity ratio
  // is printed alongside it
  double defect_ratio = std::sqrt(ratio);
  bool pass = i2 < i1 && defect_ratio >= 1.5 && defect_ratio <= 2.5;
  return {pass, "infidelity " + fmt("%.3e", i1) + " at dtau 0.005 vs " + fmt("%.3e", i2) +
                    " at 0.0025; raw ratio " + fmt("%.2f", ratio) + ", amplitude-defect ratio " +
                    fmt("%.2f", defect_ratio) + " (gate [1.5, 2.5])"};
}

// ---------- criterion 4: fig2 statistical reproduction ----------

int count_fid_drops(const std::vector<AggregateRow>& rows) {
  int n = 0;
  for (size_t s = 1; s < rows.size(); ++s)
    if (rows[s].fidelity_mean < rows[s - 1].fidelity_mean - 1e-12) ++n;
  return n;
}

int count_energy_rises(const std::vector<AggregateRow>& rows) {
  int n = 0;
  for (size_t s = 1; s < rows.size(); ++s)
    if (rows[s].energy_mean > rows[s - 1].energy_mean + 1e-12) ++n;
  return n;
}

Outcome criterion_fig2() {
  PresetOverrides ov;
  ov.output_dir = (work_dir() / "fig2").string();
  double worst_fid = 1.0, worst_rel = 0.0;
  int worst_drops = 0;
  std::string worst_leg;
  for (const ExperimentConfig& cfg : preset_configs("fig2", ov)) {
    ExperimentResult res = run_experiment(cfg);
    remember_rerun(cfg.run_name, res);
    double e0 = diagonalize(build_tfim(cfg.model)).ground_energy();
    const AggregateRow& last = res.aggregate.back();
    double rel = std::abs(last.energy_mean - e0) / std::abs(e0);
    int drops = std::max(count_fid_drops(res.aggregate), count_energy_rises(res.aggregate));
    if (last.fidelity_mean < worst_fid) {
      worst_fid = last.fidelity_mean;
      worst_leg = cfg.run_name;
    }
    worst_rel = std::max(worst_rel, rel);
    worst_drops = std::max(worst_drops, drops);
    if (last.fidelity_mean < 0.90 || rel > 0.10 || drops > 3)
      return {false, cfg.run_name + ": final mean fidelity " + fmt("%.4f", last.fidelity_mean) +
                         " (gate 0.90), energy off by " + fmt("%.1f%%", 100.0 * rel) +
                         " (gate 10%), non-monotone steps " + std::to_string(drops) +
                         " (gate 3)"};
  }
  return {true, "4 legs x 50 seeds; worst final mean fidelity " + fmt("%.4f", worst_fid) + " (" +
                    worst_leg + ", gate 0.90), worst energy gap " + fmt("%.2f%%", 100.0 * worst_rel) +
                    " (gate 10%), max non-monotone steps " + std::to_string(worst_drops) +
                    " (gate 3)"};
}

// ---------- criterion 5: fig3 shift ordering ----------

Outcome criterion_fig3() {
  PresetOverrides ov;
  ov.output_dir = (work_dir() / "fig3").string();
  // err[phase][shift index 0..2] for shifts 4.5, 5.5, 6.5
  std::vector<ExperimentConfig> legs = preset_configs("fig3", ov);
  double err[2][3];
  for (const ExperimentConfig& cfg : legs) {
    ExperimentResult res = run_experiment(cfg);
    remember_rerun(cfg.run_name, res);
    double e0 = diagonalize(build_tfim(cfg.model)).ground_energy();
    int p = cfg.phase == "ferromagnetic" ? 0 : 1;
    int s = static_cast<int>(std::lround((cfg.model.shift - 4.5)));
    err[p][s] = std::abs(res.aggregate.back().energy_mean - e0);
  }
  bool pass = true;
  std::string detail;
  for (int p = 0; p < 2; ++p) {
    bool ordered = err[p][2] < err[p][1] && err[p][1] < err[p][0];
    pass = pass && ordered;
    detail += std::string(p == 0 ? "ferro" : "; para") + " err(4.5)=" + fmt("%.2e", err[p][0]) +
              " err(5.5)=" + fmt("%.2e", err[p][1]) + " err(6.5)=" + fmt("%.2e", err[p][2]);
  }
  return {pass, detail + " (gate: strictly decreasing in the shift)"};
}

// ---------- criterion 6: fig4 noisy comparison ----------

Outcome criterion_fig4() {
  PresetOverrides ov;
  ov.output_dir = (work_dir() / "fig4").string();
  double final_fid_qgf = -1.0, final_fid_base = -1.0;
  double zeros_gain_qgf = 0.0, zeros_gain_base = 0.0;
  for (const ExperimentConfig& cfg : preset_configs("fig4", ov)) {
    ExperimentResult res = run_experiment(cfg);
    remember_rerun(cfg.run_name, res);
    if (cfg.init_mode == InitMode::random_uniform) {
      double f = res.aggregate.back().fidelity_mean;
      (cfg.method == Method::qgf ? final_fid_qgf : final_fid_base) = f;
    } else {
      // fidelity improvement over the first 50 global iterations
      const std::vector<IterationRow>& it = res.iteration_aggregate;
      double gain = it[49].fidelity_mean - it[0].fidelity_mean;
      (cfg.method == Method::qgf ? zeros_gain_qgf : zeros_gain_base) = gain;
    }
  }
  bool pass = final_fid_qgf >= final_fid_base && final_fid_qgf >= 0.98 &&
              final_fid_qgf <= 1.0 && zeros_gain_base < 0.01 && zeros_gain_qgf > 0.01;
  return {pass, "random init: final mean fidelity qgf " + fmt("%.4f", final_fid_qgf) +
                    " vs baseline " + fmt("%.4f", final_fid_base) +
                    " (gates: qgf >= baseline, qgf in [0.98, 1.0]); zeros init 50-iteration "
                    "gain: baseline " +
                    fmt("%.2e", zeros_gain_base) + " (gate < 0.01) vs qgf " +
                    fmt("%.3f", zeros_gain_qgf) + " (gate > 0.01)"};
}

// ---------- criterion 7: gradient suite ----------

Outcome criterion_gradients() {
  Rng rng(7001);
  const double h_fd = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng.uniform() * 3.0);
    int layers = 1 + static_cast<int>(rng.uniform() * 3.0);
    TfimParameters model{n, rng.uniform(0.3, 1.2), rng.uniform(0.3, 1.2), rng.uniform(0.0, 6.0)};
    InitialStateKind kind = rng.uniform() < 0.5 ? InitialStateKind::ferromagnetic
                                                : InitialStateKind::paramagnetic;
    AnsatzSpec spec(model, layers, kind);
    PauliSumHamiltonian ham = build_tfim(model);
    const int m = spec.n_params();
    std::vector<double> theta(m), theta_curr(m);
    for (double& t : theta) t = rng.uniform(-3.14159265358979, 3.14159265358979);
    for (double& t : theta_curr) t = rng.uniform(-3.14159265358979, 3.14159265358979);

    // differential states against central differences on the prepared state
    for (int k = 0; k < m; ++k) {
      StateVector d = differential_state(spec, theta, k);
      std::vector<double> tp = theta, tm = theta;
      tp[k] += h_fd;
      tm[k] -= h_fd;
      StateVector fd = prepare_state(spec, tp);
      fd -= prepare_state(spec, tm);
      fd *= cplx(1.0 / (2.0 * h_fd), 0.0);
      fd -= d;
      for (uint64_t i = 0; i < fd.dim(); ++i) worst = std::max(worst, std::abs(fd[i]));
    }

    // step-cost gradient
    std::vector<double> g = step_cost_gradient(spec, ham, theta, theta_curr, 0.005);
    for (int k = 0; k < m; ++k) {
      std::vector<double> tp = theta, tm = theta;
      tp[k] += h_fd;
      tm[k] -= h_fd;
      double fd = (step_cost(spec, ham, tp, theta_curr, 0.005) -
                   step_cost(spec, ham, tm, theta_curr, 0.005)) /
                  (2.0 * h_fd);
      worst = std::max(worst, std::abs(g[k] - fd));
    }

    // baseline energy gradient
    std::vector<double> ge(m);
    baseline_energy_gradient(spec, ham, theta, nullptr, ge);
    for (int k = 0; k < m; ++k) {
      std::vector<double> tp = theta, tm = theta;
      tp[k] += h_fd;
      tm[k] -= h_fd;
      double fd = (expectation(ham, prepare_state(spec, tp)) -
                   expectation(ham, prepare_state(spec, tm))) /
                  (2.0 * h_fd);
      worst = std::max(worst, std::abs(ge[k] - fd));
    }
  }
  return {worst <= 1e-6, "20 random configurations, 3 gradient kinds; worst deviation from "
                         "central differences " +
                             fmt("%.2e", worst) + " (gate 1e-6)"};
}

// ---------- criterion 8: mclachlan structure ----------

Outcome criterion_mclachlan() {
  Rng rng(8001);
  double worst_sym = 0.0, worst_eig = 0.0, worst_dense = 0.0, worst_paths = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    TfimParameters model = trial % 2 == 0 ? TfimParameters{4, 1.0, 0.5, 8.5}
                                          : TfimParameters{4, 0.5, 1.0, 8.5};
    InitialStateKind kind =
        trial % 2 == 0 ? InitialStateKind::ferromagnetic : InitialStateKind::paramagnetic;
    AnsatzSpec spec(model, 4, kind);
    PauliSumHamiltonian ham = build_tfim(model);
    const int m = spec.n_params();
    std::vector<double> theta(m);
    for (double& t : theta) t = rng.uniform(-3.14159265358979, 3.14159265358979);

    Eigen::MatrixXd A = mclachlan_A(spec, theta);
    worst_sym = std::max(worst_sym, (A - A.transpose()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    worst_eig = std::max(worst_eig, -es.eigenvalues().minCoeff());

    // dense recomputation through the per-parameter public path + dense H
    std::vector<Eigen::VectorXcd> d(m);
    for (int k = 0; k < m; ++k) {
      StateVector dk = differential_state(spec, theta, k);
      d[k] = Eigen::Map<const Eigen::VectorXcd>(dk.amplitudes().data(),
                                                static_cast<Eigen::Index>(dk.dim()));
    }
    StateVector psi = prepare_state(spec, theta);
    Eigen::VectorXcd psi_e = Eigen::Map<const Eigen::VectorXcd>(
        psi.amplitudes().data(), static_cast<Eigen::Index>(psi.dim()));
    Eigen::MatrixXcd hd = as_dense_matrix(ham);
    Eigen::VectorXcd h2psi = hd * (hd * psi_e);
    Eigen::VectorXd C = mclachlan_C(spec, ham, theta);
    for (int j = 0; j < m; ++j) {
      worst_dense = std::max(worst_dense, std::abs(C(j) + (d[j].dot(h2psi)).real()));
      for (int k = 0; k < m; ++k)
        worst_dense = std::max(worst_dense, std::abs(A(j, k) - (d[j].dot(d[k])).real()));
    }
    Eigen::VectorXd C2 = mclachlan_C_expanded(spec, ham, theta);
    worst_paths = std::max(worst_paths, (C - C2).cwiseAbs().maxCoeff());
  }
  bool pass = worst_sym <= 1e-12 && worst_eig <= 1e-10 && worst_dense <= 1e-10 &&
              worst_paths <= 1e-10;
  return {pass, "20 random points; symmetry defect " + fmt("%.1e", worst_sym) +
                    ", most negative eigenvalue " + fmt("%.1e", worst_eig) +
                    " (gate 1e-10), dense-recomputation gap " + fmt("%.1e", worst_dense) +
                    ", C-path disagreement " + fmt("%.1e", worst_paths) + " (gate 1e-10)"};
}

// ---------- criterion 9: channel suite ----------

Outcome criterion_noise() {
  Rng rng(9001);
  // random 3-qubit mixture
  DensityMatrix rho(3);
  double wsum = 0.0;
  for (int t = 0; t < 4; ++t) {
    StateVector v(3);
    for (uint64_t i = 0; i < v.dim(); ++i) v[i] = cplx(rng.gaussian(), rng.gaussian());
    v.normalize();
    double w = rng.uniform(0.1, 1.0);
    wsum += w;
    DensityMatrix p = DensityMatrix::pure(v);
    rho.matrix() += w * p.matrix();
  }
  rho.matrix() /= wsum;

  double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0;
  for (double p : {0.0, 1e-4, 1e-2, 0.75, 1.0}) {
    for (int q = 0; q < 3; ++q) {
      DensityMatrix r = rho;
      apply_depolarizing(r, q, p);
      worst_trace = std::max(worst_trace, std::abs(r.trace_real() - 1.0));
      worst_herm = std::max(worst_herm, r.hermiticity_defect());
      worst_eig = std::max(worst_eig, -r.min_eigenvalue());
    }
  }
  bool props_ok = worst_trace <= 1e-12 && worst_herm <= 1e-12 && worst_eig <= 1e-10;

  // trajectory average vs exact channel propagation, scalar statistic at 3 sigma
  TfimParameters model{3, 0.5, 1.0, 0.0};
  AnsatzSpec spec(model, 2, InitialStateKind::paramagnetic);
  std::vector<double> theta(spec.n_params());
  for (double& t : theta) t = rng.uniform(-1.5, 1.5);
  const double p_noise = 0.01;
  DepolarizingNoise noise;
  noise.p = p_noise;
  DensityMatrix exact_rho = prepare_state_noisy(spec, theta, noise);
  StateVector ref = prepare_state(spec, theta);
  double exact_val = fidelity_mixed(exact_rho, ref);

  const int n_samples = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < n_samples; ++t) {
    double s = fidelity_pure(sample_trajectory(spec, theta, p_noise, rng), ref);
    sum += s;
    sumsq += s * s;
  }
  double mean = sum / n_samples;
  double var = (sumsq - sum * sum / n_samples) / (n_samples - 1);
  double sigma = std::sqrt(var / n_samples);
  double dev = std::abs(mean - exact_val);
  bool mc_ok = dev <= 3.0 * sigma;

  return {props_ok && mc_ok,
          "channel properties over 5 p-values x 3 qubits: trace defect " +
              fmt("%.1e", worst_trace) + ", hermiticity " + fmt("%.1e", worst_herm) +
              ", negativity " + fmt("%.1e", worst_eig) + "; trajectory mean over 1e5 samples off "
              "the exact channel by " +
              fmt("%.2f", sigma > 0 ? dev / sigma : 0.0) + " sigma (gate 3)"};
}

// ---------- criterion 10: manifest rerun determinism ----------

Outcome criterion_determinism() {
  if (g_rerun_sources.empty())
    return {false, "no completed preset runs available to replay"};
  int legs = 0, files = 0;
  for (size_t i = 0; i < g_rerun_sources.size(); ++i) {
    const RerunSource& src = g_rerun_sources[i];
    ExperimentConfig cfg = config_from_manifest(src.manifest.string());
    cfg.output_dir = (work_dir() / "rerun" / std::to_string(i)).string();
    ExperimentResult res = run_experiment(cfg);
    std::vector<fs::path> fresh = {res.aggregate_csv, res.per_seed_csv};
    if (!res.iteration_csv.empty()) fresh.push_back(res.iteration_csv);
    if (fresh.size() != src.csvs.size())
      return {false, src.name + ": rerun produced a different file set"};
    for (size_t k = 0; k < fresh.size(); ++k) {
      if (slurp(fresh[k]) != slurp(src.csvs[k]))
        return {false, src.name + ": " + fresh[k].filename().string() +
                           " differs from the original run"};
      ++files;
    }
    ++legs;
  }
  return {true, std::to_string(legs) + " preset legs replayed from their manifests, " +
                    std::to_string(files) + " csv files byte-identical"};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "oracle ground energies", criterion_oracle},
      {2, "exact filter monotonicity", criterion_filter_monotone},
      {3, "linearized-step convergence", criterion_linearized_convergence},
      {4, "fig2 statistical reproduction", criterion_fig2},
      {5, "fig3 shift ordering", criterion_fig3},
      {6, "fig4 noisy comparison", criterion_fig4},
      {7, "gradient suite", criterion_gradients},
      {8, "mclachlan structure", criterion_mclachlan},
      {9, "channel suite", criterion_noise},
      {10, "manifest rerun determinism", criterion_determinism},
  };

  int passed = 0;
  for (const Entry& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = e.run();
    } catch (const std::exception& ex) {
      out = {false, std::string("exception: ") + ex.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %d: %s — %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", e.id,
                e.name, out.detail.c_str(), secs);
    std::fflush(stdout);
    if (out.pass) ++passed;
  }
  std::printf("acceptance: %d/10 criteria passed\n", passed);
  return passed == 10 ? 0 : 1;
}
