#pragma once
#include <complex>
#include <cstdint>
#include <vector>

namespace qgf {

using cplx = std::complex<double>;

// Dense n-qubit state. Qubit 0 is the most significant bit of the basis
// index: bit(q) = 1 << (n_qubits - 1 - q).
class StateVector {
public:
  StateVector() = default;
  explicit StateVector(int n_qubits);                      // all-zero amplitudes
  static StateVector basis_state(int n_qubits, uint64_t index);

  int n_qubits() const { return n_qubits_; }
  uint64_t dim() const { return amps_.size(); }
  cplx& operator[](uint64_t i) { return amps_[i]; }
  const cplx& operator[](uint64_t i) const { return amps_[i]; }
  std::vector<cplx>& amplitudes() { return amps_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }

  double norm() const;
  // In-place; throws DegenerateStateError if the norm is numerically zero.
  void normalize();
  void set_zero();

  StateVector& operator+=(const StateVector& o);
  StateVector& operator-=(const StateVector& o);
  StateVector& operator*=(cplx s);

private:
  int n_qubits_ = 0;
  std::vector<cplx> amps_;
};

// <a|b>; dimension mismatch throws DimensionError.
cplx inner(const StateVector& a, const StateVector& b);

// |<a|b>|^2
double fidelity_pure(const StateVector& a, const StateVector& b);

void check_same_dim(const StateVector& a, const StateVector& b);

}  // namespace qgf
