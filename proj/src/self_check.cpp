#include "qgf/self_check.hpp"

#include <cmath>

#include "qgf/engine.hpp"
#include "qgf/experiment.hpp"

namespace qgf {

namespace {

std::vector<double> random_theta(Rng& rng, int m, double lo, double hi) {
  std::vector<double> th(m);
  for (double& t : th) t = rng.uniform(lo, hi);
  return th;
}

}  // namespace

bool run_self_checks(const std::function<void(const std::string&, bool)>& report) {
  bool all = true;
  auto check = [&](const std::string& name, bool ok) {
    all = all && ok;
    report(name, ok);
  };

  {
    Rng a(42), b(42);
    bool ok = true;
    for (int i = 0; i < 1000; ++i) ok = ok && a.uniform() == b.uniform();
    check("rng determinism", ok);
  }
  {
    Rng rng(7);
    StateVector psi(4);
    for (uint64_t i = 0; i < psi.dim(); ++i)
      psi[i] = cplx(rng.gaussian(), rng.gaussian());
    psi.normalize();
    PauliString p("XYZI", 1.0);
    StateVector twice = apply_pauli(p, apply_pauli(p, psi));
    twice -= psi;
    check("pauli involution P^2 = I", twice.norm() < 1e-12);
  }
  {
    PauliSumHamiltonian h4 = build_tfim({4, 1.0, 0.5, 8.5});
    PauliSumHamiltonian h2 = build_tfim({2, 1.0, 0.0, 0.0});
    bool merged = false;
    for (const PauliString& t : h2.terms())
      if (t.letters() == "ZZ" && t.coefficient() == -2.0) merged = true;
    check("tfim term structure (2N+1, N=2 bond merge)",
          h4.terms().size() == 9 && h2.terms().size() == 4 && merged);
  }
  {
    Spectrum f = diagonalize(build_tfim({4, 1.0, 0.5, 8.5}));
    Spectrum p = diagonalize(build_tfim({4, 0.5, 1.0, 8.5}));
    check("phase duality of shifted ground energies",
          std::abs(f.ground_energy() - p.ground_energy()) < 1e-9);
  }
  {
    Spectrum s = diagonalize(build_tfim({4, 1.0, 0.5, 8.5}));
    StateVector psi0 = initial_state(InitialStateKind::ferromagnetic, 4);
    double f1 = s.fidelity_to_ground(exact_filter_state(s, psi0, 0.05));
    double f2 = s.fidelity_to_ground(exact_filter_state(s, psi0, 0.10));
    check("exact filter improves ground fidelity", f2 >= f1 && f1 >= 0.0);
  }
  {
    TfimParameters model{4, 1.0, 0.5, 8.5};
    PauliSumHamiltonian h = build_tfim(model);
    AnsatzSpec spec(model, 2, InitialStateKind::ferromagnetic);
    Rng rng(11);
    std::vector<double> th = random_theta(rng, spec.n_params(), -1.5, 1.5);
    std::vector<double> thp = random_theta(rng, spec.n_params(), -1.5, 1.5);
    std::vector<double> g = step_cost_gradient(spec, h, thp, th, 0.005);
    bool ok = true;
    const double eps = 1e-5;
    for (int k = 0; k < spec.n_params(); ++k) {
      std::vector<double> a = thp, b = thp;
      a[k] += eps;
      b[k] -= eps;
      double fd = (step_cost(spec, h, a, th, 0.005) - step_cost(spec, h, b, th, 0.005)) /
                  (2.0 * eps);
      ok = ok && std::abs(fd - g[k]) < 1e-6;
    }
    check("step-cost gradient vs finite differences", ok);
  }
  {
    TfimParameters model{4, 0.5, 1.0, 11.0};
    AnsatzSpec spec(model, 4, InitialStateKind::paramagnetic);
    Rng rng(13);
    std::vector<double> th = random_theta(rng, spec.n_params(), -3.0, 3.0);
    DensityMatrix rho = prepare_state_noisy(spec, th, DepolarizingNoise{0.01});
    check("noisy preparation keeps a valid density matrix",
          std::abs(rho.trace_real() - 1.0) < 1e-10 && rho.hermiticity_defect() < 1e-12 &&
              rho.min_eigenvalue() > -1e-12);
  }
  {
    TfimParameters model{4, 1.0, 0.5, 8.5};
    PauliSumHamiltonian h = build_tfim(model);
    AnsatzSpec spec(model, 4, InitialStateKind::ferromagnetic);
    Rng rng(17);
    std::vector<double> th = random_theta(rng, spec.n_params(), -3.0, 3.0);
    Eigen::MatrixXd A = mclachlan_A(spec, th);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    Eigen::VectorXd c1 = mclachlan_C(spec, h, th);
    Eigen::VectorXd c2 = mclachlan_C_expanded(spec, h, th);
    check("mclachlan structure (symmetry, PSD, C paths agree)",
          (A - A.transpose()).cwiseAbs().maxCoeff() < 1e-12 && es.eigenvalues()(0) > -1e-10 &&
              (c1 - c2).cwiseAbs().maxCoeff() < 1e-10);
  }
  {
    TfimParameters model{4, 1.0, 0.5, 8.5};
    PauliSumHamiltonian h = build_tfim(model);
    AnsatzSpec spec(model, 4, InitialStateKind::ferromagnetic);
    Rng rng(19);
    std::vector<double> th = random_theta(rng, spec.n_params(), -3.0, 3.0);
    double c = step_cost(spec, h, th, th, 0.0);
    check("step cost at dtau = 0 is exactly -1", c == -1.0);
  }
  return all;
}

}  // namespace qgf
