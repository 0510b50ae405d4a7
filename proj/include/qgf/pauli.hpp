#pragma once
#include <cstdint>
#include <string>

#include "qgf/state_vector.hpp"

namespace qgf {

// Tensor product of single-qubit Paulis with a real coefficient, encoded as
// bit masks so application is one pass over the amplitudes:
//   P|b> = i^{n_y} * (-1)^{popcount(b & phase_mask)} |b ^ flip_mask>
// with qubit 0 on the MSB, matching StateVector.
class PauliString {
public:
  PauliString(std::string letters, double coefficient);

  const std::string& letters() const { return letters_; }
  double coefficient() const { return coefficient_; }
  int n_qubits() const { return static_cast<int>(letters_.size()); }
  uint64_t flip_mask() const { return flip_mask_; }
  uint64_t phase_mask() const { return phase_mask_; }
  int n_y() const { return n_y_; }
  bool is_identity() const { return flip_mask_ == 0 && phase_mask_ == 0; }

  // phase factor i^{n_y} (-1)^{popcount(b & phase_mask)}
  cplx phase(uint64_t b) const;

private:
  std::string letters_;
  double coefficient_;
  uint64_t flip_mask_ = 0;
  uint64_t phase_mask_ = 0;
  int n_y_ = 0;
};

// out = coeff_scale * P.coefficient * (bare P) in  (out is overwritten)
void apply_pauli(const PauliString& p, const StateVector& in, StateVector& out,
                 double coeff_scale = 1.0);

// out += coeff_scale * P.coefficient * (bare P) in
void accumulate_pauli(const PauliString& p, const StateVector& in, StateVector& out,
                      double coeff_scale = 1.0);

// in-place application of the bare (unit-coefficient) Pauli string
void apply_pauli_bare_inplace(const PauliString& p, StateVector& s);

// out = (bare P) in, coefficient ignored
void apply_pauli_bare(const PauliString& p, const StateVector& in, StateVector& out);

StateVector apply_pauli(const PauliString& p, const StateVector& in);

// Pauli string with a single non-identity letter on one qubit.
PauliString single_qubit_pauli(int n_qubits, int qubit, char letter);

}  // namespace qgf
