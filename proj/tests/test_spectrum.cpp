#include <doctest.h>

#include <cmath>

#include "oracle_utils.hpp"
#include "qgf/ansatz.hpp"
#include "qgf/errors.hpp"
#include "qgf/spectrum.hpp"

using namespace qgf;

namespace {

Spectrum spectrum_of(int n, double j, double g, double shift) {
  return diagonalize(build_tfim({n, j, g, shift}));
}

}  // namespace

TEST_CASE("shifted ground energies match the dense oracle on both sides of the duality") {
  struct Row {
    int n;
    double j, g, shift, e0, emax;
  };
  // the J=1,g=0.5 and J=0.5,g=1 models are dual: identical shifted spectra edges
  const Row rows[] = {
      {4, 1.0, 0.5, 8.5, 4.22844158986029, 12.7715584101397},
      {4, 0.5, 1.0, 8.5, 4.22844158986029, 12.7715584101397},
      {6, 1.0, 0.5, 8.5, 2.11530543639632, 14.8846945636037},
      {6, 0.5, 1.0, 8.5, 2.11530543639633, 14.8846945636037},
      {4, 1.0, 0.5, 4.5, 0.228441589860286, 8.77155841013971},
      {4, 1.0, 0.5, 5.5, 1.22844158986029, 9.77155841013972},
      {4, 1.0, 0.5, 6.5, 2.22844158986029, 10.7715584101397},
      {4, 0.5, 1.0, 11.0, 6.72844158986028, 15.2715584101397},
  };
  for (const Row& r : rows) {
    Spectrum s = spectrum_of(r.n, r.j, r.g, r.shift);
    CHECK(s.ground_energy() == doctest::Approx(r.e0).epsilon(1e-12));
    CHECK(s.max_abs_eigenvalue() == doctest::Approx(r.emax).epsilon(1e-12));
    CHECK(s.ground_degeneracy() == 1);
    // ascending order
    for (Eigen::Index i = 1; i < s.eigenvalues().size(); ++i)
      CHECK(s.eigenvalues()(i) >= s.eigenvalues()(i - 1));
  }
}

TEST_CASE("eigenvectors reconstruct the hamiltonian") {
  PauliSumHamiltonian h = build_tfim({4, 1.0, 0.5, 8.5});
  Spectrum s = diagonalize(h);
  Eigen::MatrixXcd rebuilt =
      s.eigenvectors() * s.eigenvalues().asDiagonal() * s.eigenvectors().adjoint();
  CHECK((rebuilt - as_dense_matrix(h)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("initial-state ground fidelities") {
  Spectrum ferro4 = spectrum_of(4, 1.0, 0.5, 8.5);
  CHECK(ferro4.fidelity_to_ground(initial_state(InitialStateKind::ferromagnetic, 4)) ==
        doctest::Approx(0.334808986677466).epsilon(1e-10));
  CHECK(ferro4.fidelity_to_ground(initial_state(InitialStateKind::paramagnetic, 4)) ==
        doctest::Approx(0.923442026705981).epsilon(1e-10));
  Spectrum ferro6 = spectrum_of(6, 1.0, 0.5, 8.5);
  CHECK(ferro6.fidelity_to_ground(initial_state(InitialStateKind::ferromagnetic, 6)) ==
        doctest::Approx(0.143578080852363).epsilon(1e-10));
  Spectrum para6 = spectrum_of(6, 0.5, 1.0, 8.5);
  CHECK(para6.fidelity_to_ground(initial_state(InitialStateKind::ferromagnetic, 6)) ==
        doctest::Approx(0.900210715811616).epsilon(1e-10));
}

TEST_CASE("degenerate ground subspace fidelity") {
  Spectrum s = spectrum_of(2, 1.0, 0.0, 0.0);
  CHECK(s.ground_degeneracy() == 2);
  CHECK(s.fidelity_to_ground(StateVector::basis_state(2, 0)) == doctest::Approx(1.0));
  StateVector half(2);
  half[0] = 1.0 / std::sqrt(2.0);  // |00> in the ground subspace
  half[1] = 1.0 / std::sqrt(2.0);  // |01> in the excited subspace
  CHECK(s.fidelity_to_ground(half) == doctest::Approx(0.5));
}

TEST_CASE("exact filter frozen point and phase duality") {
  for (double j : {1.0, 0.5}) {
    double g = j == 1.0 ? 0.5 : 1.0;
    Spectrum s = spectrum_of(4, j, g, 8.5);
    InitialStateKind kind =
        j == 1.0 ? InitialStateKind::ferromagnetic : InitialStateKind::paramagnetic;
    StateVector filtered = exact_filter_state(s, initial_state(kind, 4), 0.15);
    CHECK(s.fidelity_to_ground(filtered) == doctest::Approx(0.999925567034243).epsilon(1e-10));
    CHECK(expectation(build_tfim({4, j, g, 8.5}), filtered) ==
          doctest::Approx(4.22866096254256).epsilon(1e-10));
  }
}

TEST_CASE("exact filter semigroup and identity") {
  Spectrum s = spectrum_of(4, 1.0, 0.5, 8.5);
  StateVector psi0 = initial_state(InitialStateKind::ferromagnetic, 4);
  StateVector once = exact_filter_state(s, psi0, 0.11);
  StateVector composed = exact_filter_state(s, exact_filter_state(s, psi0, 0.04), 0.07);
  CHECK(fidelity_pure(once, composed) == doctest::Approx(1.0).epsilon(1e-10));
  StateVector zero = exact_filter_state(s, psi0, 0.0);
  CHECK(fidelity_pure(zero, psi0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact filter monotonically improves fidelity and energy") {
  Spectrum s = spectrum_of(4, 1.0, 0.5, 8.5);
  PauliSumHamiltonian h = build_tfim({4, 1.0, 0.5, 8.5});
  StateVector psi0 = initial_state(InitialStateKind::ferromagnetic, 4);
  double prev_fid = -1.0, prev_e = 1e300;
  for (int k = 0; k <= 30; ++k) {
    StateVector f = exact_filter_state(s, psi0, 0.005 * k);
    double fid = s.fidelity_to_ground(f);
    double e = expectation(h, f);
    CHECK(fid >= prev_fid - 1e-10);
    CHECK(e <= prev_e + 1e-10);
    prev_fid = fid;
    prev_e = e;
  }
}

TEST_CASE("exact filter error paths") {
  Spectrum s = spectrum_of(4, 1.0, 0.5, 8.5);
  StateVector psi0 = initial_state(InitialStateKind::ferromagnetic, 4);
  CHECK_THROWS_AS(exact_filter_state(s, psi0, -0.1), ParameterError);
  // e^{-E^2 tau} underflows every amplitude at large tau and shift 8.5
  CHECK_THROWS_AS(exact_filter_state(s, psi0, 50.0), DegenerateStateError);
}

TEST_CASE("linearized step frozen infidelities and quadratic shrinkage") {
  Spectrum s = spectrum_of(4, 1.0, 0.5, 8.5);
  StateVector psi0 = initial_state(InitialStateKind::ferromagnetic, 4);
  StateVector exact = exact_filter_state(s, psi0, 0.15);

  auto accumulated_infidelity = [&](double dtau) {
    StateVector psi = psi0;
    int k = static_cast<int>(std::lround(0.15 / dtau));
    for (int i = 0; i < k; ++i) psi = exact_linearized_step(s, psi, dtau);
    return 1.0 - fidelity_pure(exact, psi);
  };

  double i1 = accumulated_infidelity(0.005);
  double i2 = accumulated_infidelity(0.0025);
  CHECK(i1 == doctest::Approx(3.2427053951456e-05).epsilon(1e-6));
  CHECK(i2 == doctest::Approx(1.09074501710715e-05).epsilon(1e-6));
  CHECK(i2 < i1);
}

TEST_CASE("linearized step error paths") {
  Spectrum s = spectrum_of(4, 1.0, 0.5, 8.5);
  StateVector psi0 = initial_state(InitialStateKind::ferromagnetic, 4);
  CHECK_THROWS_AS(exact_linearized_step(s, psi0, 0.0), ParameterError);
  CHECK_THROWS_AS(exact_linearized_step(s, psi0, -0.001), ParameterError);
  // dtau * lambda_max^2 = 0.0075 * 163.11... >= 1
  CHECK_THROWS_AS(exact_linearized_step(s, psi0, 0.0075), StepSizeError);
  CHECK_NOTHROW(exact_linearized_step(s, psi0, 0.005));
}
