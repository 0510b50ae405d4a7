#include "qgf/engine.hpp"

#include <cmath>

#include "qgf/errors.hpp"

namespace qgf {

void validate(const EvolutionConfig& c) {
  if (!(c.dtau > 0.0) || !std::isfinite(c.dtau))
    throw ConfigError("dtau must be > 0");
  if (c.n_steps < 1) throw ConfigError("n_steps must be >= 1");
  if (!(c.learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (c.max_inner_iterations < 1) throw ConfigError("max_inner_iterations must be >= 1");
  if (!(c.stall_tolerance >= 0.0)) throw ConfigError("stall_tolerance must be >= 0");
  if (!(c.adam_beta1 >= 0.0 && c.adam_beta1 < 1.0) ||
      !(c.adam_beta2 >= 0.0 && c.adam_beta2 < 1.0))
    throw ConfigError("adam betas must lie in [0,1)");
  if (!(c.adam_epsilon > 0.0)) throw ConfigError("adam_epsilon must be > 0");
  if (!(c.mclachlan_regularization >= 0.0))
    throw ConfigError("mclachlan_regularization must be >= 0");
  if (!(c.noise_p >= 0.0 && c.noise_p <= 1.0)) throw ConfigError("noise_p must lie in [0,1]");
  if (c.n_trajectories < 1) throw ConfigError("n_trajectories must be >= 1");
  if (c.total_iteration_cap < 0) throw ConfigError("total_iteration_cap must be >= 0");
  if (c.log_per_iteration && c.total_iteration_cap == 0)
    throw ConfigError("log_per_iteration needs a total_iteration_cap");
}

// ---------- step cost ----------

StepCostContext::StepCostContext(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                 const std::vector<double>& theta_curr, double dtau)
    : spec_(spec), dtau_(dtau), theta_curr_(theta_curr) {
  if (h.n_qubits() != spec.n_qubits()) throw DimensionError("hamiltonian/ansatz qubit mismatch");
  StateVector psi = prepare_state(spec, theta_curr);
  StateVector w = apply_h_squared(h, psi);
  w *= -dtau;
  w += psi;
  w_.push_back(std::move(w));
}

StepCostContext::StepCostContext(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                 const std::vector<double>& theta_curr, double dtau,
                                 double noise_p, int n_trajectories, Rng& rng)
    : spec_(spec), dtau_(dtau), theta_curr_(theta_curr) {
  if (h.n_qubits() != spec.n_qubits()) throw DimensionError("hamiltonian/ansatz qubit mismatch");
  if (noise_p == 0.0) {
    StateVector psi = prepare_state(spec, theta_curr);
    StateVector w = apply_h_squared(h, psi);
    w *= -dtau;
    w += psi;
    w_.push_back(std::move(w));
    return;
  }
  if (n_trajectories < 1) throw ParameterError("n_trajectories must be >= 1");
  realizations_.reserve(n_trajectories);
  w_.reserve(n_trajectories);
  for (int t = 0; t < n_trajectories; ++t) {
    realizations_.push_back(draw_noise_realization(spec, noise_p, rng));
    StateVector psi = prepare_trajectory(spec, theta_curr, realizations_.back());
    StateVector w = apply_h_squared(h, psi);
    w *= -dtau;
    w += psi;
    w_.push_back(std::move(w));
  }
}

cplx StepCostContext::overlap(const std::vector<double>& theta_next) const {
  // self-overlap of an unfiltered state is 1 by construction; bypass the
  // summation so the dtau=0 fixed point is exact in floating point
  if (dtau_ == 0.0 && theta_next == theta_curr_) return cplx(1.0, 0.0);
  cplx z(0.0, 0.0);
  if (realizations_.empty()) {
    z = inner(prepare_state(spec_, theta_next), w_[0]);
  } else {
    for (size_t t = 0; t < realizations_.size(); ++t)
      z += inner(prepare_trajectory(spec_, theta_next, realizations_[t]), w_[t]);
    z /= static_cast<double>(realizations_.size());
  }
  return z;
}

double StepCostContext::cost(const std::vector<double>& theta_next) const {
  double mod = std::abs(overlap(theta_next));
  // at dtau = 0 the target is a unit vector, so the modulus cannot exceed 1;
  // clamp away summation rounding so no nearby point outranks the fixed point
  if (dtau_ == 0.0 && mod > 1.0) mod = 1.0;
  return -mod;
}

double StepCostContext::cost_and_gradient(const std::vector<double>& theta_next,
                                          std::vector<double>& grad) const {
  const int m = spec_.n_params();
  grad.assign(m, 0.0);
  cplx z(0.0, 0.0);
  std::vector<cplx> dz(m, cplx(0.0, 0.0));
  StateVector psi;
  std::vector<StateVector> dpsi;
  if (realizations_.empty()) {
    prepare_with_differentials(spec_, theta_next, psi, dpsi);
    z = inner(psi, w_[0]);
    for (int k = 0; k < m; ++k) dz[k] = inner(dpsi[k], w_[0]);
  } else {
    for (size_t t = 0; t < realizations_.size(); ++t) {
      prepare_trajectory_with_differentials(spec_, theta_next, realizations_[t], psi, dpsi);
      z += inner(psi, w_[t]);
      for (int k = 0; k < m; ++k) dz[k] += inner(dpsi[k], w_[t]);
    }
    double invT = 1.0 / static_cast<double>(realizations_.size());
    z *= invT;
    for (cplx& d : dz) d *= invT;
  }
  double mod = std::abs(z);
  if (dtau_ == 0.0 && mod > 1.0) mod = 1.0;  // same rounding clamp as cost()
  if (mod < 1e-14) {
    // modulus floor: phase undefined, use central differences on the cost
    const double h = 1e-7;
    std::vector<double> th = theta_next;
    for (int k = 0; k < m; ++k) {
      th[k] = theta_next[k] + h;
      double cp = cost(th);
      th[k] = theta_next[k] - h;
      double cm = cost(th);
      th[k] = theta_next[k];
      grad[k] = (cp - cm) / (2.0 * h);
    }
    return -mod;
  }
  for (int k = 0; k < m; ++k) grad[k] = -(std::conj(z) * dz[k]).real() / mod;
  return -mod;
}

double step_cost(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                 const std::vector<double>& theta_next, const std::vector<double>& theta_curr,
                 double dtau) {
  return StepCostContext(spec, h, theta_curr, dtau).cost(theta_next);
}

std::vector<double> step_cost_gradient(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                       const std::vector<double>& theta_next,
                                       const std::vector<double>& theta_curr, double dtau) {
  std::vector<double> g;
  StepCostContext(spec, h, theta_curr, dtau).cost_and_gradient(theta_next, g);
  return g;
}

// ---------- inner optimizers ----------

namespace {

InnerResult optimize_first_order(const StepCostContext& ctx, const std::vector<double>& theta0,
                                 const EvolutionConfig& cfg, int budget) {
  const int m = static_cast<int>(theta0.size());
  const bool adam = cfg.optimizer == Optimizer::adam;
  std::vector<double> th = theta0, g(m), mom(m, 0.0), vel(m, 0.0);
  double c_cur = ctx.cost(th);
  InnerResult res;
  res.theta = th;
  res.cost = c_cur;
  double best = c_cur;
  for (int it = 1; it <= budget; ++it) {
    res.iterations_used = it;
    ctx.cost_and_gradient(th, g);
    if (adam) {
      double b1t = std::pow(cfg.adam_beta1, it), b2t = std::pow(cfg.adam_beta2, it);
      for (int k = 0; k < m; ++k) {
        mom[k] = cfg.adam_beta1 * mom[k] + (1.0 - cfg.adam_beta1) * g[k];
        vel[k] = cfg.adam_beta2 * vel[k] + (1.0 - cfg.adam_beta2) * g[k] * g[k];
        double mh = mom[k] / (1.0 - b1t), vh = vel[k] / (1.0 - b2t);
        th[k] -= cfg.learning_rate * mh / (std::sqrt(vh) + cfg.adam_epsilon);
      }
    } else {
      for (int k = 0; k < m; ++k) th[k] -= cfg.learning_rate * g[k];
    }
    double c_new = ctx.cost(th);
    if (c_new < best) {
      best = c_new;
      res.theta = th;
      res.cost = c_new;
    }
    if (c_cur - c_new < cfg.stall_tolerance) {
      res.stalled = true;
      return res;
    }
    c_cur = c_new;
  }
  return res;
}

InnerResult optimize_bfgs(const StepCostContext& ctx, const std::vector<double>& theta0,
                          const EvolutionConfig& cfg, int budget) {
  const int m = static_cast<int>(theta0.size());
  Eigen::VectorXd th(m), g(m);
  for (int k = 0; k < m; ++k) th(k) = theta0[k];
  std::vector<double> thv = theta0, gv(m);
  double c_cur = ctx.cost_and_gradient(thv, gv);
  for (int k = 0; k < m; ++k) g(k) = gv[k];
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(m, m);
  InnerResult res;
  res.theta = thv;
  res.cost = c_cur;
  const double c1 = 1e-4;
  for (int it = 1; it <= budget; ++it) {
    res.iterations_used = it;
    Eigen::VectorXd d = -(H * g);
    double dg = d.dot(g);
    if (dg >= 0.0) {  // curvature model unusable, restart from steepest descent
      H.setIdentity();
      d = -g;
      dg = d.dot(g);
      if (dg >= 0.0) {
        res.stalled = true;
        return res;
      }
    }
    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd cand(m);
    std::vector<double> candv(m);
    double c_new = 0.0;
    for (int ls = 0; ls < 40; ++ls) {
      cand = th + alpha * d;
      for (int k = 0; k < m; ++k) candv[k] = cand(k);
      c_new = ctx.cost(candv);
      if (c_new < c_cur + c1 * alpha * dg && c_new < c_cur - cfg.stall_tolerance) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      res.stalled = true;
      return res;
    }
    std::vector<double> g_newv(m);
    ctx.cost_and_gradient(candv, g_newv);
    Eigen::VectorXd g_new(m);
    for (int k = 0; k < m; ++k) g_new(k) = g_newv[k];
    Eigen::VectorXd s = cand - th, y = g_new - g;
    double sy = s.dot(y);
    if (sy > 1e-12) {
      double rho = 1.0 / sy;
      Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
      H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) +
          rho * s * s.transpose();
    }
    th = cand;
    c_cur = c_new;
    g = g_new;
    res.theta = candv;  // monotone: last accepted point is the best seen
    res.cost = c_cur;
  }
  return res;
}

}  // namespace

InnerResult optimize_step(const StepCostContext& ctx, const std::vector<double>& theta_curr,
                          const EvolutionConfig& cfg, int budget) {
  if (budget < 1) throw ParameterError("inner budget must be >= 1");
  switch (cfg.optimizer) {
    case Optimizer::bfgs:
      return optimize_bfgs(ctx, theta_curr, cfg, budget);
    case Optimizer::gradient_descent:
    case Optimizer::adam:
      return optimize_first_order(ctx, theta_curr, cfg, budget);
    case Optimizer::mclachlan:
      throw ConfigError("mclachlan updates bypass the inner optimizer");
  }
  throw ConfigError("unknown optimizer");
}

InnerResult optimize_step(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                          const std::vector<double>& theta_curr, const EvolutionConfig& cfg) {
  StepCostContext ctx(spec, h, theta_curr, cfg.dtau);
  return optimize_step(ctx, theta_curr, cfg, cfg.max_inner_iterations);
}

// ---------- McLachlan ----------

Eigen::MatrixXd mclachlan_A(const AnsatzSpec& spec, const std::vector<double>& theta) {
  StateVector psi;
  std::vector<StateVector> dpsi;
  prepare_with_differentials(spec, theta, psi, dpsi);
  const int m = spec.n_params();
  Eigen::MatrixXd A(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = j; k < m; ++k) {
      double v = inner(dpsi[j], dpsi[k]).real();
      A(j, k) = v;
      A(k, j) = v;
    }
  return A;
}

Eigen::VectorXd mclachlan_C(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                            const std::vector<double>& theta) {
  StateVector psi;
  std::vector<StateVector> dpsi;
  prepare_with_differentials(spec, theta, psi, dpsi);
  StateVector h2psi = apply_h_squared(h, psi);
  const int m = spec.n_params();
  Eigen::VectorXd C(m);
  for (int j = 0; j < m; ++j) C(j) = -inner(dpsi[j], h2psi).real();
  return C;
}

Eigen::VectorXd mclachlan_C_expanded(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                     const std::vector<double>& theta) {
  StateVector psi;
  std::vector<StateVector> dpsi;
  prepare_with_differentials(spec, theta, psi, dpsi);
  const int m = spec.n_params();
  Eigen::VectorXd C = Eigen::VectorXd::Zero(m);
  StateVector u(spec.n_qubits()), v(spec.n_qubits());
  for (const PauliString& tm : h.terms()) {
    apply_pauli(tm, psi, u);
    for (const PauliString& tl : h.terms()) {
      apply_pauli(tl, u, v);
      for (int j = 0; j < m; ++j) C(j) -= inner(dpsi[j], v).real();
    }
  }
  return C;
}

std::vector<double> mclachlan_update(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                     const std::vector<double>& theta, double dtau,
                                     double regularization) {
  if (!(dtau > 0.0)) throw ParameterError("dtau must be > 0");
  if (!(regularization >= 0.0)) throw ParameterError("regularization must be >= 0");
  Eigen::MatrixXd A = mclachlan_A(spec, theta);
  Eigen::VectorXd C = mclachlan_C(spec, h, theta);
  const int m = spec.n_params();
  if (A.cwiseAbs().maxCoeff() < 1e-14 && C.cwiseAbs().maxCoeff() > 1e-12)
    throw IllPosedUpdateError(
        "McLachlan metric vanished while the driving vector did not; the update direction is "
        "undefined at this theta");
  Eigen::MatrixXd M = A + regularization * Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd thetadot = M.completeOrthogonalDecomposition().solve(C);
  std::vector<double> out(theta);
  for (int k = 0; k < m; ++k) out[k] += dtau * thetadot(k);
  return out;
}

// ---------- full runs ----------

namespace {

struct ExactView {
  const AnsatzSpec& spec;
  const PauliSumHamiltonian& h;
  const Spectrum& spectrum;
  double noise_p;

  void measure(const std::vector<double>& theta, double& energy, double& fidelity) const {
    if (noise_p == 0.0) {
      StateVector psi = prepare_state(spec, theta);
      energy = expectation(h, psi);
      fidelity = spectrum.fidelity_to_ground(psi);
    } else {
      DensityMatrix rho = prepare_state_noisy(spec, theta, DepolarizingNoise{noise_p});
      energy = expectation_mixed(h, rho);
      fidelity = spectrum.fidelity_to_ground(rho);
    }
  }
};

void fill_iteration_log(TrajectoryRecord& rec, long upto, double fid, double energy) {
  while (static_cast<long>(rec.fidelity_by_iteration.size()) < upto) {
    rec.fidelity_by_iteration.push_back(fid);
    rec.energy_by_iteration.push_back(energy);
  }
}

}  // namespace

TrajectoryRecord run_qgf_evolution(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                   const Spectrum& spectrum, const EvolutionConfig& cfg,
                                   const std::vector<double>& theta0, Rng& rng) {
  validate(cfg);
  if (static_cast<int>(theta0.size()) != spec.n_params())
    throw DimensionError("theta0 length does not match ansatz parameter count");
  ExactView view{spec, h, spectrum, cfg.noise_p};
  TrajectoryRecord rec;
  std::vector<double> th = theta0;
  double energy, fid;
  view.measure(th, energy, fid);
  rec.steps.push_back({th, energy, fid, 0.0, 0, false});
  const long cap = cfg.total_iteration_cap;
  long used = 0;
  for (int step = 1; step <= cfg.n_steps; ++step) {
    if (cap > 0 && used >= cap) break;
    int budget = cfg.max_inner_iterations;
    if (cap > 0) budget = static_cast<int>(std::min<long>(budget, cap - used));
    StepLog log;
    if (cfg.optimizer == Optimizer::mclachlan) {
      th = mclachlan_update(spec, h, th, cfg.dtau, cfg.mclachlan_regularization);
      log.cost = step_cost(spec, h, th, rec.steps.back().theta, cfg.dtau);
      log.inner_iterations = 1;
      log.stalled = false;
      used += 1;
    } else {
      StepCostContext ctx(spec, h, th, cfg.dtau, cfg.noise_p, cfg.n_trajectories, rng);
      InnerResult r = optimize_step(ctx, th, cfg, budget);
      th = r.theta;
      log.cost = r.cost;
      log.inner_iterations = r.iterations_used;
      log.stalled = r.stalled;
      used += r.iterations_used;
    }
    view.measure(th, energy, fid);
    log.theta = th;
    log.energy = energy;
    log.fidelity = fid;
    rec.steps.push_back(std::move(log));
    if (cfg.log_per_iteration) fill_iteration_log(rec, std::min(used, cap), fid, energy);
  }
  rec.iterations_used = used;
  if (cfg.log_per_iteration)
    fill_iteration_log(rec, cap, rec.steps.back().fidelity, rec.steps.back().energy);
  return rec;
}

TrajectoryRecord run_qgf_evolution(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                   const Spectrum& spectrum, const EvolutionConfig& cfg) {
  Rng rng(cfg.seed);
  std::vector<double> theta0(spec.n_params());
  for (double& t : theta0) t = rng.uniform(-3.14159265358979323846, 3.14159265358979323846);
  return run_qgf_evolution(spec, h, spectrum, cfg, theta0, rng);
}

double baseline_energy_gradient(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                const std::vector<double>& theta,
                                const std::vector<NoiseRealization>* realizations,
                                std::vector<double>& grad) {
  const int m = spec.n_params();
  grad.assign(m, 0.0);
  double energy = 0.0;
  StateVector psi;
  std::vector<StateVector> dpsi;
  auto accumulate = [&](double weight) {
    StateVector hpsi = apply_h(h, psi);
    energy += weight * inner(psi, hpsi).real();
    for (int k = 0; k < m; ++k) grad[k] += weight * 2.0 * inner(dpsi[k], hpsi).real();
  };
  if (realizations == nullptr || realizations->empty()) {
    prepare_with_differentials(spec, theta, psi, dpsi);
    accumulate(1.0);
  } else {
    double wgt = 1.0 / static_cast<double>(realizations->size());
    for (const NoiseRealization& r : *realizations) {
      prepare_trajectory_with_differentials(spec, theta, r, psi, dpsi);
      accumulate(wgt);
    }
  }
  return energy;
}

TrajectoryRecord run_baseline_vqe(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                  const Spectrum& spectrum, const EvolutionConfig& cfg,
                                  const std::vector<double>& theta0, Rng& rng) {
  validate(cfg);
  if (static_cast<int>(theta0.size()) != spec.n_params())
    throw DimensionError("theta0 length does not match ansatz parameter count");
  ExactView view{spec, h, spectrum, cfg.noise_p};
  TrajectoryRecord rec;
  std::vector<double> th = theta0;
  double energy, fid;
  view.measure(th, energy, fid);
  rec.steps.push_back({th, energy, fid, 0.0, 0, false});
  if (cfg.log_per_iteration) {
    rec.fidelity_by_iteration.reserve(cfg.n_steps);
    rec.energy_by_iteration.reserve(cfg.n_steps);
  }
  std::vector<double> g(spec.n_params());
  for (int it = 1; it <= cfg.n_steps; ++it) {
    double estimate;
    if (cfg.noise_p > 0.0) {
      std::vector<NoiseRealization> rs;
      rs.reserve(cfg.n_trajectories);
      for (int t = 0; t < cfg.n_trajectories; ++t)
        rs.push_back(draw_noise_realization(spec, cfg.noise_p, rng));
      estimate = baseline_energy_gradient(spec, h, th, &rs, g);
    } else {
      estimate = baseline_energy_gradient(spec, h, th, nullptr, g);
    }
    for (size_t k = 0; k < th.size(); ++k) th[k] -= cfg.learning_rate * g[k];
    view.measure(th, energy, fid);
    rec.steps.push_back({th, energy, fid, estimate, 1, false});
    if (cfg.log_per_iteration) {
      rec.fidelity_by_iteration.push_back(fid);
      rec.energy_by_iteration.push_back(energy);
    }
  }
  rec.iterations_used = cfg.n_steps;
  return rec;
}

}  // namespace qgf
