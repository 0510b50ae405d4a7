#pragma once
#include <vector>

#include "qgf/density_matrix.hpp"
#include "qgf/hamiltonian.hpp"
#include "qgf/noise.hpp"
#include "qgf/pauli.hpp"
#include "qgf/rng.hpp"
#include "qgf/state_vector.hpp"

namespace qgf {

enum class InitialStateKind { ferromagnetic, paramagnetic };

// One elementary rotation exp(-i theta[param_index] * term.coefficient * P).
struct RotationFactor {
  int param_index;
  PauliString term;
};

// p-layer QAOA alternation for the TFIM: per layer l (ascending), first the
// ZZ-group rotation exp(-i theta[2l+1] h_zz), then the X-group rotation
// exp(-i theta[2l] h_x), each expanded into exact per-term factors (the
// group's terms commute). Generators exclude the identity shift.
class AnsatzSpec {
public:
  AnsatzSpec(const TfimParameters& model, int layers, InitialStateKind init);

  int n_qubits() const { return n_qubits_; }
  int layers() const { return layers_; }
  int n_params() const { return 2 * layers_; }
  InitialStateKind initial_state_kind() const { return init_; }
  const std::vector<RotationFactor>& factors() const { return factors_; }

  // depolarizing sites: one per (factor, touched qubit), circuit order,
  // enumerated for every factor regardless of the angle it ends up with
  int n_noise_sites() const { return n_noise_sites_; }

private:
  int n_qubits_;
  int layers_;
  InitialStateKind init_;
  std::vector<RotationFactor> factors_;
  int n_noise_sites_;
};

// ferromagnetic: |-> on every qubit; paramagnetic: Z^n applied to the GHZ
// state, (|0...0> + (-1)^n |1...1>)/sqrt(2)
StateVector initial_state(InitialStateKind kind, int n_qubits);

StateVector prepare_state(const AnsatzSpec& spec, const std::vector<double>& theta);

// state plus all d|psi>/d theta_k via forward accumulation
void prepare_with_differentials(const AnsatzSpec& spec, const std::vector<double>& theta,
                                StateVector& psi, std::vector<StateVector>& dpsi);
StateVector differential_state(const AnsatzSpec& spec, const std::vector<double>& theta, int k);

// Exact channel propagation: after each executed rotation factor, a
// depolarizing channel on every qubit that factor touches. A factor whose
// total angle is exactly zero executes nothing and contributes no noise.
DensityMatrix prepare_state_noisy(const AnsatzSpec& spec, const std::vector<double>& theta,
                                  const DepolarizingNoise& noise);

// One Kraus draw per noise site (fixed layout, so realizations stay aligned
// across different theta).
struct NoiseRealization {
  std::vector<KrausOp> ops;
};

NoiseRealization draw_noise_realization(const AnsatzSpec& spec, double p, Rng& rng);

StateVector prepare_trajectory(const AnsatzSpec& spec, const std::vector<double>& theta,
                               const NoiseRealization& realization);
void prepare_trajectory_with_differentials(const AnsatzSpec& spec,
                                           const std::vector<double>& theta,
                                           const NoiseRealization& realization, StateVector& psi,
                                           std::vector<StateVector>& dpsi);

// draw + propagate one pure-state sample of the noisy circuit
StateVector sample_trajectory(const AnsatzSpec& spec, const std::vector<double>& theta, double p,
                              Rng& rng);

}  // namespace qgf
