#include "qgf/ansatz.hpp"

#include <bit>
#include <cmath>

#include "qgf/errors.hpp"

namespace qgf {

namespace {

void check_theta(const AnsatzSpec& spec, const std::vector<double>& theta) {
  if (static_cast<int>(theta.size()) != spec.n_params())
    throw DimensionError("theta has " + std::to_string(theta.size()) + " entries, ansatz needs " +
                         std::to_string(spec.n_params()));
  for (double t : theta)
    if (!std::isfinite(t)) throw ParameterError("theta contains a non-finite entry");
}

// psi <- cos(a) psi - i sin(a) P psi, using buf as scratch
void rotate_inplace(const PauliString& p, double angle, StateVector& psi, StateVector& buf) {
  apply_pauli_bare(p, psi, buf);
  const double c = std::cos(angle), s = std::sin(angle);
  const cplx mis(0.0, -s);
  for (uint64_t i = 0; i < psi.dim(); ++i) psi[i] = c * psi[i] + mis * buf[i];
}

std::vector<int> touched_qubits(const PauliString& p) {
  std::vector<int> qs;
  for (int q = 0; q < p.n_qubits(); ++q)
    if (p.letters()[q] != 'I') qs.push_back(q);
  return qs;
}

}  // namespace

AnsatzSpec::AnsatzSpec(const TfimParameters& model, int layers, InitialStateKind init)
    : n_qubits_(model.n_qubits), layers_(layers), init_(init) {
  if (layers < 1) throw ParameterError("ansatz needs at least 1 layer");
  PauliSumHamiltonian h = build_tfim(TfimParameters{model.n_qubits, model.j, model.g, 0.0});
  std::vector<PauliString> zz, x;
  for (const PauliString& t : h.terms()) {
    if (t.letters().find('Z') != std::string::npos) zz.push_back(t);
    else if (t.letters().find('X') != std::string::npos) x.push_back(t);
  }
  for (int l = 0; l < layers; ++l) {
    for (const PauliString& t : zz) factors_.push_back({2 * l + 1, t});
    for (const PauliString& t : x) factors_.push_back({2 * l, t});
  }
  n_noise_sites_ = 0;
  for (const RotationFactor& f : factors_)
    n_noise_sites_ += static_cast<int>(touched_qubits(f.term).size());
}

StateVector initial_state(InitialStateKind kind, int n_qubits) {
  StateVector s(n_qubits);
  if (kind == InitialStateKind::ferromagnetic) {
    double a = std::pow(2.0, -0.5 * n_qubits);
    for (uint64_t b = 0; b < s.dim(); ++b)
      s[b] = (std::popcount(b) & 1) ? -a : a;
  } else {
    double a = std::sqrt(0.5);
    s[0] = a;
    s[s.dim() - 1] = (n_qubits % 2 == 0) ? a : -a;
  }
  return s;
}

StateVector prepare_state(const AnsatzSpec& spec, const std::vector<double>& theta) {
  check_theta(spec, theta);
  StateVector psi = initial_state(spec.initial_state_kind(), spec.n_qubits());
  StateVector buf(spec.n_qubits());
  for (const RotationFactor& f : spec.factors()) {
    double angle = theta[f.param_index] * f.term.coefficient();
    if (angle == 0.0) continue;
    rotate_inplace(f.term, angle, psi, buf);
  }
  return psi;
}

void prepare_with_differentials(const AnsatzSpec& spec, const std::vector<double>& theta,
                                StateVector& psi, std::vector<StateVector>& dpsi) {
  check_theta(spec, theta);
  const int m = spec.n_params();
  psi = initial_state(spec.initial_state_kind(), spec.n_qubits());
  dpsi.assign(m, StateVector(spec.n_qubits()));
  StateVector buf(spec.n_qubits());
  for (const RotationFactor& f : spec.factors()) {
    double angle = theta[f.param_index] * f.term.coefficient();
    if (angle != 0.0) {
      rotate_inplace(f.term, angle, psi, buf);
      for (StateVector& d : dpsi) rotate_inplace(f.term, angle, d, buf);
    }
    // d/dtheta_k of this factor inserts -i c P on the evolved state
    apply_pauli(f.term, psi, buf);  // coefficient included
    StateVector& dk = dpsi[f.param_index];
    for (uint64_t i = 0; i < dk.dim(); ++i) dk[i] += cplx(0.0, -1.0) * buf[i];
  }
}

StateVector differential_state(const AnsatzSpec& spec, const std::vector<double>& theta, int k) {
  if (k < 0 || k >= spec.n_params()) throw ParameterError("differential index out of range");
  StateVector psi;
  std::vector<StateVector> dpsi;
  prepare_with_differentials(spec, theta, psi, dpsi);
  return dpsi[k];
}

DensityMatrix prepare_state_noisy(const AnsatzSpec& spec, const std::vector<double>& theta,
                                  const DepolarizingNoise& noise) {
  check_theta(spec, theta);
  check_probability(noise.p);
  DensityMatrix rho = DensityMatrix::pure(initial_state(spec.initial_state_kind(), spec.n_qubits()));
  auto channel = [&](int q) {
    if (noise.global_mode) apply_global_depolarizing(rho, noise.p);
    else apply_depolarizing(rho, q, noise.p);
  };
  if (noise.on_preparation)
    for (int q = 0; q < spec.n_qubits(); ++q) channel(q);
  for (const RotationFactor& f : spec.factors()) {
    double angle = theta[f.param_index] * f.term.coefficient();
    if (angle == 0.0) continue;
    rotate_density(rho, f.term, angle);
    for (int q : touched_qubits(f.term)) channel(q);
  }
  return rho;
}

NoiseRealization draw_noise_realization(const AnsatzSpec& spec, double p, Rng& rng) {
  check_probability(p);
  NoiseRealization r;
  r.ops.resize(spec.n_noise_sites());
  for (KrausOp& op : r.ops) op = sample_depolarizing(p, rng);
  return r;
}

namespace {

template <typename ColumnFn>
void walk_trajectory(const AnsatzSpec& spec, const std::vector<double>& theta,
                     const NoiseRealization& realization, ColumnFn&& per_factor) {
  if (static_cast<int>(realization.ops.size()) != spec.n_noise_sites())
    throw DimensionError("noise realization has wrong site count");
  size_t site = 0;
  for (const RotationFactor& f : spec.factors()) {
    std::vector<int> qs = touched_qubits(f.term);
    double angle = theta[f.param_index] * f.term.coefficient();
    per_factor(f, angle, realization.ops.data() + site, qs);
    site += qs.size();
  }
}

}  // namespace

StateVector prepare_trajectory(const AnsatzSpec& spec, const std::vector<double>& theta,
                               const NoiseRealization& realization) {
  check_theta(spec, theta);
  StateVector psi = initial_state(spec.initial_state_kind(), spec.n_qubits());
  StateVector buf(spec.n_qubits());
  walk_trajectory(spec, theta, realization,
                  [&](const RotationFactor& f, double angle, const KrausOp* ops,
                      const std::vector<int>& qs) {
                    if (angle == 0.0) return;  // skipped factor: no rotation, no noise
                    rotate_inplace(f.term, angle, psi, buf);
                    for (size_t i = 0; i < qs.size(); ++i) {
                      if (ops[i] == KrausOp::identity) continue;
                      PauliString ins = single_qubit_pauli(spec.n_qubits(), qs[i],
                                                           "IXYZ"[static_cast<int>(ops[i])]);
                      apply_pauli_bare_inplace(ins, psi);
                    }
                  });
  return psi;
}

void prepare_trajectory_with_differentials(const AnsatzSpec& spec,
                                           const std::vector<double>& theta,
                                           const NoiseRealization& realization, StateVector& psi,
                                           std::vector<StateVector>& dpsi) {
  check_theta(spec, theta);
  const int m = spec.n_params();
  psi = initial_state(spec.initial_state_kind(), spec.n_qubits());
  dpsi.assign(m, StateVector(spec.n_qubits()));
  StateVector buf(spec.n_qubits());
  walk_trajectory(spec, theta, realization,
                  [&](const RotationFactor& f, double angle, const KrausOp* ops,
                      const std::vector<int>& qs) {
                    if (angle != 0.0) {
                      rotate_inplace(f.term, angle, psi, buf);
                      for (StateVector& d : dpsi) rotate_inplace(f.term, angle, d, buf);
                    }
                    apply_pauli(f.term, psi, buf);
                    StateVector& dk = dpsi[f.param_index];
                    for (uint64_t i = 0; i < dk.dim(); ++i) dk[i] += cplx(0.0, -1.0) * buf[i];
                    if (angle == 0.0) return;
                    for (size_t i = 0; i < qs.size(); ++i) {
                      if (ops[i] == KrausOp::identity) continue;
                      PauliString ins = single_qubit_pauli(spec.n_qubits(), qs[i],
                                                           "IXYZ"[static_cast<int>(ops[i])]);
                      apply_pauli_bare_inplace(ins, psi);
                      for (StateVector& d : dpsi) apply_pauli_bare_inplace(ins, d);
                    }
                  });
}

StateVector sample_trajectory(const AnsatzSpec& spec, const std::vector<double>& theta, double p,
                              Rng& rng) {
  NoiseRealization r = draw_noise_realization(spec, p, rng);
  StateVector psi = prepare_trajectory(spec, theta, r);
  psi.normalize();
  return psi;
}

}  // namespace qgf
