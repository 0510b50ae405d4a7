#include "qgf/noise.hpp"

#include <cmath>

#include "qgf/errors.hpp"
#include "qgf/pauli.hpp"

namespace qgf {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ParameterError("probability must lie in [0,1], got " + std::to_string(p));
}

void apply_depolarizing(DensityMatrix& rho, int qubit, double p) {
  check_probability(p);
  if (qubit < 0 || qubit >= rho.n_qubits())
    throw ParameterError("qubit index " + std::to_string(qubit) + " out of range");
  if (p == 0.0) return;
  const uint64_t d = rho.dim();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
  for (char ch : {'X', 'Y', 'Z'}) {
    PauliString pp = single_qubit_pauli(rho.n_qubits(), qubit, ch);
    const uint64_t flip = pp.flip_mask();
    for (uint64_t j = 0; j < d; ++j) {
      cplx fj = pp.phase(j);
      for (uint64_t i = 0; i < d; ++i)
        acc(i, j) += pp.phase(i ^ flip) * rho.matrix()(i ^ flip, j ^ flip) * fj;
    }
  }
  rho.matrix() = (1.0 - p) * rho.matrix() + (p / 3.0) * acc;
}

void apply_global_depolarizing(DensityMatrix& rho, double p) {
  check_probability(p);
  if (p == 0.0) return;
  double tr = rho.trace_real();
  rho.matrix() *= (1.0 - p);
  double mix = p * tr / static_cast<double>(rho.dim());
  for (uint64_t i = 0; i < rho.dim(); ++i) rho.matrix()(i, i) += mix;
}

KrausOp sample_depolarizing(double p, Rng& rng) {
  check_probability(p);
  double u = rng.uniform();
  if (u >= p) return KrausOp::identity;
  int k = static_cast<int>(u / (p / 3.0));
  if (k > 2) k = 2;
  return static_cast<KrausOp>(k + 1);
}

}  // namespace qgf
