#pragma once
#include <Eigen/Dense>

#include "qgf/hamiltonian.hpp"
#include "qgf/state_vector.hpp"

namespace qgf {

// Dense density operator; same MSB qubit ordering as StateVector.
class DensityMatrix {
public:
  DensityMatrix() = default;
  explicit DensityMatrix(int n_qubits);  // zero matrix
  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  uint64_t dim() const { return m_.rows(); }
  Eigen::MatrixXcd& matrix() { return m_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }

  double trace_real() const { return m_.trace().real(); }
  double hermiticity_defect() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const;

private:
  int n_qubits_ = 0;
  Eigen::MatrixXcd m_;
};

// <psi|rho|psi> for a normalized |psi>.
double fidelity_mixed(const DensityMatrix& rho, const StateVector& psi);

// tr(H rho), real part asserted small imaginary residue
double expectation_mixed(const PauliSumHamiltonian& h, const DensityMatrix& rho);

// rho -> U rho U^dag for U = exp(-i angle * bare P), using
// U rho U^dag = c^2 rho - i c s (P rho - rho P) + s^2 P rho P.
void rotate_density(DensityMatrix& rho, const PauliString& p, double angle);

}  // namespace qgf
