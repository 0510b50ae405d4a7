#pragma once
#include <Eigen/Dense>

#include "qgf/density_matrix.hpp"
#include "qgf/hamiltonian.hpp"
#include "qgf/state_vector.hpp"

namespace qgf {

// Full eigendecomposition of a Pauli-sum Hamiltonian; the exact reference
// that experiment fidelities and filter oracles are measured against.
class Spectrum {
public:
  Spectrum(int n_qubits, Eigen::VectorXd eigenvalues, Eigen::MatrixXcd eigenvectors);

  int n_qubits() const { return n_qubits_; }
  const Eigen::VectorXd& eigenvalues() const { return vals_; }
  const Eigen::MatrixXcd& eigenvectors() const { return vecs_; }
  double ground_energy() const { return vals_(0); }
  double max_abs_eigenvalue() const;

  // number of eigenvalues within tol of the smallest
  int ground_degeneracy(double tol = 1e-8) const;

  // squared projection onto the (possibly degenerate) ground subspace
  double fidelity_to_ground(const StateVector& psi, double tol = 1e-8) const;
  double fidelity_to_ground(const DensityMatrix& rho, double tol = 1e-8) const;

private:
  int n_qubits_;
  Eigen::VectorXd vals_;    // ascending
  Eigen::MatrixXcd vecs_;   // columns
};

Spectrum diagonalize(const PauliSumHamiltonian& h);

// normalize(e^{-H^2 tau} |psi0>) via the spectral sum; annihilation to
// numerical zero raises DegenerateStateError.
StateVector exact_filter_state(const Spectrum& s, const StateVector& psi0, double tau);

// normalize((1 - dtau H^2)|psi>), spectrally; requires dtau * max|lambda|^2 < 1
// or the truncation inverts amplitude ordering (StepSizeError).
StateVector exact_linearized_step(const Spectrum& s, const StateVector& psi, double dtau);

}  // namespace qgf
