#include "qgf/spectrum.hpp"

#include <cmath>

#include "qgf/errors.hpp"

namespace qgf {

Spectrum::Spectrum(int n_qubits, Eigen::VectorXd eigenvalues, Eigen::MatrixXcd eigenvectors)
    : n_qubits_(n_qubits), vals_(std::move(eigenvalues)), vecs_(std::move(eigenvectors)) {
  if (vecs_.rows() != vecs_.cols() || vecs_.rows() != vals_.size() ||
      vals_.size() != (int64_t(1) << n_qubits_))
    throw DimensionError("spectrum dimensions inconsistent");
}

double Spectrum::max_abs_eigenvalue() const {
  return std::max(std::abs(vals_(0)), std::abs(vals_(vals_.size() - 1)));
}

int Spectrum::ground_degeneracy(double tol) const {
  int d = 0;
  while (d < vals_.size() && vals_(d) < vals_(0) + tol) ++d;
  return d;
}

double Spectrum::fidelity_to_ground(const StateVector& psi, double tol) const {
  if (psi.dim() != uint64_t(vals_.size())) throw DimensionError("spectrum/state dimension mismatch");
  Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), psi.dim());
  int deg = ground_degeneracy(tol);
  double f = 0.0;
  for (int d = 0; d < deg; ++d) f += std::norm(cplx(vecs_.col(d).adjoint() * v));
  return f;
}

double Spectrum::fidelity_to_ground(const DensityMatrix& rho, double tol) const {
  if (rho.dim() != uint64_t(vals_.size()))
    throw DimensionError("spectrum/density dimension mismatch");
  int deg = ground_degeneracy(tol);
  double f = 0.0;
  for (int d = 0; d < deg; ++d) {
    cplx x = vecs_.col(d).adjoint() * (rho.matrix() * vecs_.col(d));
    f += x.real();
  }
  return f;
}

Spectrum diagonalize(const PauliSumHamiltonian& h) {
  Eigen::MatrixXcd m = as_dense_matrix(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) throw DegenerateStateError("eigendecomposition failed");
  return Spectrum(h.n_qubits(), es.eigenvalues(), es.eigenvectors());
}

StateVector exact_filter_state(const Spectrum& s, const StateVector& psi0, double tau) {
  if (tau < 0.0 || !std::isfinite(tau)) throw ParameterError("filter time must be >= 0");
  if (psi0.dim() != uint64_t(s.eigenvalues().size()))
    throw DimensionError("spectrum/state dimension mismatch");
  Eigen::Map<const Eigen::VectorXcd> v(psi0.amplitudes().data(), psi0.dim());
  Eigen::VectorXcd c = s.eigenvectors().adjoint() * v;
  for (int i = 0; i < c.size(); ++i) {
    double lam = s.eigenvalues()(i);
    c(i) *= std::exp(-lam * lam * tau);
  }
  double n = c.norm();
  if (n < 1e-150)
    throw DegenerateStateError("gaussian filter annihilated the state at tau = " +
                               std::to_string(tau));
  c /= n;
  Eigen::VectorXcd out = s.eigenvectors() * c;
  StateVector r(psi0.n_qubits());
  for (uint64_t i = 0; i < r.dim(); ++i) r[i] = out(i);
  return r;
}

StateVector exact_linearized_step(const Spectrum& s, const StateVector& psi, double dtau) {
  if (dtau <= 0.0 || !std::isfinite(dtau)) throw ParameterError("step size must be > 0");
  double lmax = s.max_abs_eigenvalue();
  if (dtau * lmax * lmax >= 1.0)
    throw StepSizeError("dtau * max|eigenvalue|^2 = " + std::to_string(dtau * lmax * lmax) +
                        " >= 1; the linearized filter is not a contraction");
  if (psi.dim() != uint64_t(s.eigenvalues().size()))
    throw DimensionError("spectrum/state dimension mismatch");
  Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), psi.dim());
  Eigen::VectorXcd c = s.eigenvectors().adjoint() * v;
  for (int i = 0; i < c.size(); ++i) {
    double lam = s.eigenvalues()(i);
    c(i) *= (1.0 - dtau * lam * lam);
  }
  double n = c.norm();
  if (n < 1e-150) throw DegenerateStateError("linearized step annihilated the state");
  c /= n;
  Eigen::VectorXcd out = s.eigenvectors() * c;
  StateVector r(psi.n_qubits());
  for (uint64_t i = 0; i < r.dim(); ++i) r[i] = out(i);
  return r;
}

}  // namespace qgf
