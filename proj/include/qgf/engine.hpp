#pragma once
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qgf/ansatz.hpp"
#include "qgf/hamiltonian.hpp"
#include "qgf/rng.hpp"
#include "qgf/spectrum.hpp"

namespace qgf {

enum class Optimizer { gradient_descent, adam, mclachlan, bfgs };

struct EvolutionConfig {
  double dtau = 0.005;
  int n_steps = 30;
  Optimizer optimizer = Optimizer::gradient_descent;
  double learning_rate = 0.1;
  int max_inner_iterations = 10;
  double stall_tolerance = 1e-9;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double mclachlan_regularization = 1e-6;
  double noise_p = 0.0;
  int n_trajectories = 32;
  uint64_t seed = 0;
  // optional global budget of inner iterations across all steps (0 = none)
  long total_iteration_cap = 0;
  // fill fidelity/energy per global inner iteration (needs a cap)
  bool log_per_iteration = false;
};

void validate(const EvolutionConfig& c);

struct StepLog {
  std::vector<double> theta;
  double energy = 0.0;
  double fidelity = 0.0;
  double cost = 0.0;  // 0 for the initial record (nothing optimized yet)
  int inner_iterations = 0;
  bool stalled = false;
};

struct TrajectoryRecord {
  std::vector<StepLog> steps;  // executed steps + 1 (leading initial record)
  // per-global-inner-iteration curves, last-value-carried to the cap; only
  // filled when log_per_iteration is set
  std::vector<double> fidelity_by_iteration;
  std::vector<double> energy_by_iteration;
  long iterations_used = 0;
};

// Per-step cost evaluator. Freezes the target side w_t = (1 - dtau H^2)
// |psi_t(theta_curr)> per trajectory at construction, so every cost query
// during one inner optimization sees the same target (common random numbers
// under noise: bra and ket of each trajectory share one realization).
class StepCostContext {
public:
  // noiseless
  StepCostContext(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                  const std::vector<double>& theta_curr, double dtau);
  // noisy: draws n_trajectories realizations from rng and freezes them
  StepCostContext(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                  const std::vector<double>& theta_curr, double dtau, double noise_p,
                  int n_trajectories, Rng& rng);

  // -| avg_t <psi_t(theta_next) | w_t> |
  double cost(const std::vector<double>& theta_next) const;
  // analytic gradient d cost / d theta_next; falls back to central finite
  // differences when the modulus is below 1e-14 (the phase is undefined there)
  double cost_and_gradient(const std::vector<double>& theta_next, std::vector<double>& grad) const;

private:
  cplx overlap(const std::vector<double>& theta_next) const;

  const AnsatzSpec& spec_;
  double dtau_;
  std::vector<double> theta_curr_;
  std::vector<NoiseRealization> realizations_;  // empty = noiseless
  std::vector<StateVector> w_;
};

// noiseless convenience wrappers
double step_cost(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                 const std::vector<double>& theta_next, const std::vector<double>& theta_curr,
                 double dtau);
std::vector<double> step_cost_gradient(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                       const std::vector<double>& theta_next,
                                       const std::vector<double>& theta_curr, double dtau);

struct InnerResult {
  std::vector<double> theta;
  int iterations_used = 0;
  bool stalled = false;
  double cost = 0.0;
};

// One filter step: minimize ctx.cost from the warm start theta_curr with the
// configured optimizer, at most `budget` parameter updates, early exit on
// stall. Returns the best parameters seen.
InnerResult optimize_step(const StepCostContext& ctx, const std::vector<double>& theta_curr,
                          const EvolutionConfig& cfg, int budget);
// noiseless convenience with budget = cfg.max_inner_iterations
InnerResult optimize_step(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                          const std::vector<double>& theta_curr, const EvolutionConfig& cfg);

// McLachlan pieces: A_jk = Re <d_j psi|d_k psi>, C_j = -Re <d_j psi|H^2|psi>
Eigen::MatrixXd mclachlan_A(const AnsatzSpec& spec, const std::vector<double>& theta);
Eigen::VectorXd mclachlan_C(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                            const std::vector<double>& theta);
// same quantity through the expanded double sum over Hamiltonian term pairs
Eigen::VectorXd mclachlan_C_expanded(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                     const std::vector<double>& theta);
// theta + dtau * thetadot with (A + lambda I) thetadot = C solved in the
// least-squares sense; A ~ 0 with C != 0 raises IllPosedUpdateError
std::vector<double> mclachlan_update(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                     const std::vector<double>& theta, double dtau,
                                     double regularization);

// Full filter evolution from theta0. rng drives trajectory realizations (and
// nothing else); energies/fidelities always come from exact simulation
// (pure state, or channel propagation when noise_p > 0).
TrajectoryRecord run_qgf_evolution(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                   const Spectrum& spectrum, const EvolutionConfig& cfg,
                                   const std::vector<double>& theta0, Rng& rng);
// convenience form drawing theta0 uniform in [-pi, pi) from cfg.seed
TrajectoryRecord run_qgf_evolution(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                   const Spectrum& spectrum, const EvolutionConfig& cfg);

// Plain VQE on the energy with fixed-rate gradient descent; n_steps plays the
// role of the iteration count, one record per iteration. Noisy gradients are
// trajectory averages with realizations redrawn every iteration.
TrajectoryRecord run_baseline_vqe(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                  const Spectrum& spectrum, const EvolutionConfig& cfg,
                                  const std::vector<double>& theta0, Rng& rng);

// energy estimate and gradient 2 Re <d_k psi|H|psi>, trajectory-averaged when
// realizations are supplied
double baseline_energy_gradient(const AnsatzSpec& spec, const PauliSumHamiltonian& h,
                                const std::vector<double>& theta,
                                const std::vector<NoiseRealization>* realizations,
                                std::vector<double>& grad);

}  // namespace qgf
