#include "qgf/pauli.hpp"

#include <bit>

#include "qgf/errors.hpp"

namespace qgf {

namespace {
const cplx kIPow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
}

PauliString::PauliString(std::string letters, double coefficient)
    : letters_(std::move(letters)), coefficient_(coefficient) {
  int n = static_cast<int>(letters_.size());
  if (n < 1 || n > 20) throw ParameterError("pauli string length must be 1..20");
  for (int q = 0; q < n; ++q) {
    char ch = letters_[q];
    uint64_t bit = uint64_t(1) << (n - 1 - q);
    switch (ch) {
      case 'I': break;
      case 'X': flip_mask_ |= bit; break;
      case 'Y': flip_mask_ |= bit; phase_mask_ |= bit; ++n_y_; break;
      case 'Z': phase_mask_ |= bit; break;
      default:
        throw ParameterError(std::string("invalid pauli letter '") + ch + "' in " + letters_);
    }
  }
}

cplx PauliString::phase(uint64_t b) const {
  cplx f = kIPow[n_y_ & 3];
  return (std::popcount(b & phase_mask_) & 1) ? -f : f;
}

void apply_pauli(const PauliString& p, const StateVector& in, StateVector& out,
                 double coeff_scale) {
  if (p.n_qubits() != in.n_qubits())
    throw DimensionError("pauli string length " + std::to_string(p.n_qubits()) +
                         " does not match state qubits " + std::to_string(in.n_qubits()));
  if (out.dim() != in.dim()) out = StateVector(in.n_qubits());
  out.set_zero();
  accumulate_pauli(p, in, out, coeff_scale);
}

void accumulate_pauli(const PauliString& p, const StateVector& in, StateVector& out,
                      double coeff_scale) {
  if (p.n_qubits() != in.n_qubits() || in.dim() != out.dim())
    throw DimensionError("pauli/state dimension mismatch");
  const double c = p.coefficient() * coeff_scale;
  if (c == 0.0) return;
  const uint64_t flip = p.flip_mask();
  const uint64_t phase = p.phase_mask();
  const cplx base = c * kIPow[p.n_y() & 3];
  const uint64_t d = in.dim();
  for (uint64_t b = 0; b < d; ++b) {
    cplx f = (std::popcount(b & phase) & 1) ? -base : base;
    out[b ^ flip] += f * in[b];
  }
}

void apply_pauli_bare_inplace(const PauliString& p, StateVector& s) {
  if (p.n_qubits() != s.n_qubits()) throw DimensionError("pauli/state dimension mismatch");
  const uint64_t flip = p.flip_mask();
  const uint64_t phase = p.phase_mask();
  const cplx base = kIPow[p.n_y() & 3];
  const uint64_t d = s.dim();
  if (flip == 0) {
    for (uint64_t b = 0; b < d; ++b)
      s[b] *= (std::popcount(b & phase) & 1) ? -base : base;
    return;
  }
  for (uint64_t b = 0; b < d; ++b) {
    uint64_t t = b ^ flip;
    if (t < b) continue;  // each pair swapped once
    cplx fb = (std::popcount(b & phase) & 1) ? -base : base;
    cplx ft = (std::popcount(t & phase) & 1) ? -base : base;
    cplx vb = s[b];
    s[b] = ft * s[t];
    s[t] = fb * vb;
  }
}

void apply_pauli_bare(const PauliString& p, const StateVector& in, StateVector& out) {
  if (p.n_qubits() != in.n_qubits() || in.dim() != out.dim())
    throw DimensionError("pauli/state dimension mismatch");
  const uint64_t flip = p.flip_mask();
  const uint64_t phase = p.phase_mask();
  const cplx base = kIPow[p.n_y() & 3];
  const uint64_t d = in.dim();
  for (uint64_t b = 0; b < d; ++b) {
    cplx f = (std::popcount(b & phase) & 1) ? -base : base;
    out[b ^ flip] = f * in[b];
  }
}

StateVector apply_pauli(const PauliString& p, const StateVector& in) {
  StateVector out(in.n_qubits());
  accumulate_pauli(p, in, out);
  return out;
}

PauliString single_qubit_pauli(int n_qubits, int qubit, char letter) {
  if (qubit < 0 || qubit >= n_qubits)
    throw ParameterError("qubit index " + std::to_string(qubit) + " out of range");
  std::string s(n_qubits, 'I');
  s[qubit] = letter;
  return PauliString(std::move(s), 1.0);
}

}  // namespace qgf
