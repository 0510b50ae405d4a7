#pragma once
#include <vector>

#include <Eigen/Dense>

#include "qgf/pauli.hpp"
#include "qgf/state_vector.hpp"

namespace qgf {

struct TfimParameters {
  int n_qubits = 4;
  double j = 1.0;      // ZZ coupling
  double g = 0.5;      // transverse field
  double shift = 0.0;  // identity offset E_s
};

// Real-coefficient sum of Pauli strings.
class PauliSumHamiltonian {
public:
  PauliSumHamiltonian(int n_qubits, std::vector<PauliString> terms);

  int n_qubits() const { return n_qubits_; }
  const std::vector<PauliString>& terms() const { return terms_; }

private:
  int n_qubits_;
  std::vector<PauliString> terms_;
};

// -J sum Z_n Z_{n+1} (periodic) + g sum X_n + shift * I.
// Duplicate strings are merged (the two N=2 bonds collapse to one -2J term);
// for N > 2 the result has 2N+1 terms. The shift is a real identity term so
// it flows through every H and H^2 application.
PauliSumHamiltonian build_tfim(const TfimParameters& p);

void apply_h(const PauliSumHamiltonian& h, const StateVector& in, StateVector& out);
StateVector apply_h(const PauliSumHamiltonian& h, const StateVector& in);
StateVector apply_h_squared(const PauliSumHamiltonian& h, const StateVector& in);

// <psi|H|psi> for a normalized |psi>; rejects non-normalized input and
// verifies the result is real to 1e-10.
double expectation(const PauliSumHamiltonian& h, const StateVector& psi);

// Dense matrix form; refuses more than 12 qubits.
Eigen::MatrixXcd as_dense_matrix(const PauliSumHamiltonian& h);

}  // namespace qgf
