#include "qgf/density_matrix.hpp"

#include <cmath>

#include "qgf/errors.hpp"

namespace qgf {

DensityMatrix::DensityMatrix(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 12)
    throw ParameterError("density matrix limited to 1..12 qubits");
  uint64_t d = uint64_t(1) << n_qubits;
  m_ = Eigen::MatrixXcd::Zero(d, d);
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  DensityMatrix rho(psi.n_qubits());
  Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), psi.dim());
  rho.m_ = v * v.adjoint();
  return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  DensityMatrix rho(n_qubits);
  double p = 1.0 / static_cast<double>(rho.dim());
  for (uint64_t i = 0; i < rho.dim(); ++i) rho.m_(i, i) = p;
  return rho;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double fidelity_mixed(const DensityMatrix& rho, const StateVector& psi) {
  if (rho.dim() != psi.dim()) throw DimensionError("density/state dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-9)
    throw ParameterError("fidelity_mixed requires a normalized state");
  Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), psi.dim());
  cplx f = v.adjoint() * (rho.matrix() * v);
  return f.real();
}

double expectation_mixed(const PauliSumHamiltonian& h, const DensityMatrix& rho) {
  if (h.n_qubits() != rho.n_qubits()) throw DimensionError("hamiltonian/density qubit mismatch");
  // tr(H rho) accumulated per term without forming H
  cplx tr(0.0, 0.0);
  const uint64_t d = rho.dim();
  for (const PauliString& t : h.terms()) {
    // tr(P rho) = sum_b <b|P rho|b> = sum_b phase(b^f)... use (P rho)[b,b] = phi(b^f) rho[b^f, b]
    cplx s(0.0, 0.0);
    for (uint64_t b = 0; b < d; ++b) {
      uint64_t src = b ^ t.flip_mask();
      s += t.phase(src) * rho.matrix()(src, b);
    }
    tr += t.coefficient() * s;
  }
  if (std::abs(tr.imag()) >= 1e-8)
    throw ParameterError("expectation_mixed came out non-real");
  return tr.real();
}

void rotate_density(DensityMatrix& rho, const PauliString& p, double angle) {
  if (p.n_qubits() != rho.n_qubits()) throw DimensionError("pauli/density qubit mismatch");
  const double c = std::cos(angle), s = std::sin(angle);
  if (s == 0.0 && c == 1.0) return;
  const uint64_t d = rho.dim();
  const uint64_t flip = p.flip_mask();
  const Eigen::MatrixXcd& m = rho.matrix();
  Eigen::MatrixXcd pr(d, d), rp(d, d);
  for (uint64_t i = 0; i < d; ++i) {
    cplx fi = p.phase(i ^ flip);
    for (uint64_t j = 0; j < d; ++j) pr(i, j) = fi * m(i ^ flip, j);
  }
  for (uint64_t j = 0; j < d; ++j) {
    cplx fj = p.phase(j);
    for (uint64_t i = 0; i < d; ++i) rp(i, j) = fj * m(i, j ^ flip);
  }
  Eigen::MatrixXcd prp(d, d);
  for (uint64_t j = 0; j < d; ++j) {
    cplx fj = p.phase(j);
    for (uint64_t i = 0; i < d; ++i) prp(i, j) = fj * pr(i, j ^ flip);
  }
  rho.matrix() = (c * c) * m - cplx(0, 1) * (c * s) * (pr - rp) + (s * s) * prp;
}

}  // namespace qgf
