#include "qgf/hamiltonian.hpp"

#include <cmath>
#include <map>

#include "qgf/errors.hpp"

namespace qgf {

PauliSumHamiltonian::PauliSumHamiltonian(int n_qubits, std::vector<PauliString> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
  for (const PauliString& t : terms_)
    if (t.n_qubits() != n_qubits_)
      throw DimensionError("hamiltonian term length does not match qubit count");
}

PauliSumHamiltonian build_tfim(const TfimParameters& p) {
  const int n = p.n_qubits;
  if (n < 2) throw ParameterError("TFIM needs at least 2 qubits, got " + std::to_string(n));
  if (n > 20) throw ParameterError("TFIM size too large: " + std::to_string(n));
  if (!std::isfinite(p.j) || !std::isfinite(p.g) || !std::isfinite(p.shift))
    throw ParameterError("TFIM couplings must be finite");

  std::vector<std::string> order;
  std::map<std::string, double> coeff;
  auto add = [&](std::string s, double c) {
    auto [it, inserted] = coeff.try_emplace(s, 0.0);
    if (inserted) order.push_back(s);
    it->second += c;
  };
  for (int q = 0; q < n; ++q) {
    std::string s(n, 'I');
    s[q] = 'Z';
    s[(q + 1) % n] = 'Z';
    add(std::move(s), -p.j);
  }
  for (int q = 0; q < n; ++q) {
    std::string s(n, 'I');
    s[q] = 'X';
    add(std::move(s), p.g);
  }
  add(std::string(n, 'I'), p.shift);

  std::vector<PauliString> terms;
  terms.reserve(order.size());
  for (const std::string& s : order) terms.emplace_back(s, coeff[s]);
  return PauliSumHamiltonian(n, std::move(terms));
}

void apply_h(const PauliSumHamiltonian& h, const StateVector& in, StateVector& out) {
  if (h.n_qubits() != in.n_qubits())
    throw DimensionError("hamiltonian/state qubit mismatch");
  if (out.dim() != in.dim()) out = StateVector(in.n_qubits());
  out.set_zero();
  for (const PauliString& t : h.terms()) accumulate_pauli(t, in, out);
}

StateVector apply_h(const PauliSumHamiltonian& h, const StateVector& in) {
  StateVector out(in.n_qubits());
  for (const PauliString& t : h.terms()) accumulate_pauli(t, in, out);
  return out;
}

StateVector apply_h_squared(const PauliSumHamiltonian& h, const StateVector& in) {
  return apply_h(h, apply_h(h, in));
}

double expectation(const PauliSumHamiltonian& h, const StateVector& psi) {
  double n = psi.norm();
  if (std::abs(n - 1.0) > 1e-9)
    throw ParameterError("expectation requires a normalized state, norm = " + std::to_string(n));
  cplx v = inner(psi, apply_h(h, psi));
  if (std::abs(v.imag()) >= 1e-10)
    throw ParameterError("expectation of a real Pauli sum came out non-real");
  return v.real();
}

Eigen::MatrixXcd as_dense_matrix(const PauliSumHamiltonian& h) {
  if (h.n_qubits() > 12)
    throw DimensionError("dense form limited to 12 qubits, got " + std::to_string(h.n_qubits()));
  const uint64_t d = uint64_t(1) << h.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (const PauliString& t : h.terms())
    for (uint64_t b = 0; b < d; ++b)
      m(b ^ t.flip_mask(), b) += t.coefficient() * t.phase(b);
  return m;
}

}  // namespace qgf
