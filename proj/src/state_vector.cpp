#include "qgf/state_vector.hpp"

#include <cmath>

#include "qgf/errors.hpp"

namespace qgf {

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 20)
    throw ParameterError("state size must have 1..20 qubits, got " + std::to_string(n_qubits));
  amps_.assign(uint64_t(1) << n_qubits, cplx(0.0, 0.0));
}

StateVector StateVector::basis_state(int n_qubits, uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim())
    throw ParameterError("basis index " + std::to_string(index) + " out of range");
  s.amps_[index] = 1.0;
  return s;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const cplx& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  double n = norm();
  if (n < 1e-300 || !std::isfinite(n))
    throw DegenerateStateError("cannot normalize a numerically zero state");
  double inv = 1.0 / n;
  for (cplx& a : amps_) a *= inv;
}

void StateVector::set_zero() {
  for (cplx& a : amps_) a = 0.0;
}

StateVector& StateVector::operator+=(const StateVector& o) {
  check_same_dim(*this, o);
  for (uint64_t i = 0; i < dim(); ++i) amps_[i] += o.amps_[i];
  return *this;
}

StateVector& StateVector::operator-=(const StateVector& o) {
  check_same_dim(*this, o);
  for (uint64_t i = 0; i < dim(); ++i) amps_[i] -= o.amps_[i];
  return *this;
}

StateVector& StateVector::operator*=(cplx s) {
  for (cplx& a : amps_) a *= s;
  return *this;
}

void check_same_dim(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim() || a.n_qubits() != b.n_qubits())
    throw DimensionError("state dimensions differ: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
}

cplx inner(const StateVector& a, const StateVector& b) {
  check_same_dim(a, b);
  cplx s(0.0, 0.0);
  for (uint64_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double fidelity_pure(const StateVector& a, const StateVector& b) {
  return std::norm(inner(a, b));
}

}  // namespace qgf
