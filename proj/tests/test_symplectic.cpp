#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "lagdom/exterior.hpp"
#include "lagdom/lag_grass.hpp"
#include "lagdom/rng.hpp"
#include "lagdom/symplectic.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lagdom;
using testutil::random_symplectic;

TEST_CASE("symplectic residual and random symplectic generation") {
  Rng rng(101);
  CHECK(is_symplectic(Eigen::MatrixXd::Identity(4, 4)));
  CHECK(!is_symplectic(2.0 * Eigen::MatrixXd::Identity(4, 4)));
  for (int n : {1, 2, 3}) {
    Eigen::MatrixXd g = random_symplectic(n, rng);
    CHECK(is_symplectic(g, 1e-9));
    CHECK(symplectic_residual(g) < 1e-10);
  }
  CHECK(is_symplectic(standard_J(3)));
}

TEST_CASE("pullback is functorial and matches pointwise evaluation") {
  Rng rng(103);
  const int n = 3;
  ExteriorForm a = oracle::random_form(n, 2, rng);

  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  CHECK(oracle::max_coeff_diff(pullback(id, a), a) == 0.0);

  Eigen::MatrixXd g = rng.gaussian_matrix(2 * n, 2 * n);
  Eigen::MatrixXd h = rng.gaussian_matrix(2 * n, 2 * n);
  CHECK(oracle::max_coeff_diff(pullback(g * h, a),
                               pullback(h, pullback(g, a))) < 1e-10);

  Eigen::MatrixXcd vecs = rng.gaussian_complex_matrix(2 * n, 2);
  Complex got = oracle::eval_tensor(oracle::from_form(pullback(g, a)), vecs);
  Complex want = oracle::eval_tensor(oracle::from_form(a), g * vecs);
  CHECK(std::abs(got - want) < 1e-10);
}

TEST_CASE("group action preserves omega and rejects non-symplectic input") {
  Rng rng(107);
  for (int n : {2, 3}) {
    Eigen::MatrixXd g = random_symplectic(n, rng);
    CHECK(oracle::max_coeff_diff(group_act(g, omega_form(n)), omega_form(n)) <
          1e-10);
  }
  CHECK_THROWS_AS(group_act(2.0 * Eigen::MatrixXd::Identity(4, 4),
                            omega_form(2)),
                  std::domain_error);
}

TEST_CASE("pullback derivative is the directional derivative at identity") {
  Rng rng(109);
  const int n = 2;
  for (int k : {1, 2, 3}) {
    ExteriorForm a = oracle::random_form(n, k, rng);
    Eigen::MatrixXd x = rng.gaussian_matrix(2 * n, 2 * n);
    const double h = 1e-6;
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    ExteriorForm fd = (1.0 / (2 * h)) *
                      (pullback(id + h * x, a) - pullback(id - h * x, a));
    CHECK(oracle::max_coeff_diff(pullback_derivative(x, a), fd) < 1e-7);
  }
}

TEST_CASE("polar Cartan decomposition splits into unitary and positive parts") {
  Rng rng(113);
  for (int n : {1, 2, 3}) {
    Eigen::MatrixXd g = random_symplectic(n, rng, 0.7);
    PolarCartan pc = polar_cartan_decompose(g);
    const int d = 2 * n;
    CHECK((pc.u.transpose() * pc.u - Eigen::MatrixXd::Identity(d, d)).norm() <
          1e-10);
    CHECK(is_symplectic(pc.u, 1e-8));
    CHECK((pc.x - pc.x.transpose()).norm() < 1e-10);
    // x lies in sp(2n): x^T Om + Om x = 0
    Eigen::MatrixXd om = omega_gram(n);
    CHECK((pc.x.transpose() * om + om * pc.x).norm() < 1e-8);
    CHECK((pc.u * pc.x.exp() - g).norm() < 1e-8 * (1 + g.norm()));
  }
}

TEST_CASE("complex structure diagnostics") {
  Rng rng(127);
  auto j0 = analyze_structure(standard_J(2));
  CHECK(j0.square_residual < 1e-14);
  CHECK(j0.omega_residual < 1e-14);
  CHECK(j0.compatible);

  Eigen::MatrixXd g = random_symplectic(2, rng);
  auto conj = analyze_structure(g * standard_J(2) * g.inverse());
  CHECK(conj.square_residual < 1e-9);
  CHECK(conj.omega_residual < 1e-9);
  CHECK(conj.compatible);

  auto neg = analyze_structure(-standard_J(2));
  CHECK(neg.square_residual < 1e-14);
  CHECK(!neg.compatible);

  auto id = analyze_structure(Eigen::MatrixXd::Identity(4, 4));
  CHECK(id.square_residual > 1.0);
}

TEST_CASE("type decomposition splits by rotation character") {
  Rng rng(131);
  const int n = 2;

  auto parts = type_decompose(dz_form(n, 1), standard_J(n));
  REQUIRE(parts.size() == 2);
  CHECK(coeff_norm(parts[0]) < 1e-12);
  CHECK(oracle::max_coeff_diff(parts[1], dz_form(n, 1)) < 1e-12);

  auto dx_parts = type_decompose(basis_covector(n, 1), standard_J(n));
  CHECK(oracle::max_coeff_diff(dx_parts[1], Complex(0.5) * dz_form(n, 1)) <
        1e-12);
  CHECK(oracle::max_coeff_diff(dx_parts[0],
                               Complex(0.5) * conj_form(dz_form(n, 1))) <
        1e-12);

  Eigen::MatrixXd g = random_symplectic(n, rng);
  Eigen::MatrixXd j = g * standard_J(n) * g.inverse();
  const int k = 2;
  ExteriorForm a = oracle::random_form(n, k, rng);
  auto comps = type_decompose(a, j);
  REQUIRE(int(comps.size()) == k + 1);

  ExteriorForm sum(n, k);
  for (const auto& c : comps) sum = sum + c;
  CHECK(oracle::max_coeff_diff(sum, a) < 1e-10);

  const double phi = 0.37;
  Eigen::MatrixXd rot = std::cos(phi) * Eigen::MatrixXd::Identity(2 * n, 2 * n) +
                        std::sin(phi) * j;
  for (int p = 0; p <= k; ++p) {
    Complex lam = std::exp(Complex(0, (2 * p - k) * phi));
    CHECK(oracle::max_coeff_diff(pullback(rot, comps[p]), lam * comps[p]) <
          1e-9);
    auto again = type_decompose(comps[p], j);
    CHECK(oracle::max_coeff_diff(again[p], comps[p]) < 1e-10);
  }
}

TEST_CASE("siegel points give compatible structures and determinant forms") {
  Rng rng(137);
  const int n = 2;

  SiegelPoint base{Eigen::MatrixXd::Zero(n, n),
                   Eigen::MatrixXd::Identity(n, n)};
  auto data = siegel_complex_structure(base);
  CHECK((data.j - standard_J(n)).norm() < 1e-14);
  CHECK(oracle::max_coeff_diff(siegel_form(base), dz_top(n)) < 1e-14);

  Eigen::MatrixXd x0 = rng.gaussian_matrix(n, n);
  Eigen::MatrixXd x = 0.5 * (x0 + x0.transpose());
  Eigen::MatrixXd y0 = rng.gaussian_matrix(n, n);
  Eigen::MatrixXd y = y0 * y0.transpose() + 0.3 * Eigen::MatrixXd::Identity(n, n);
  SiegelPoint z{x, y};

  auto jz = siegel_complex_structure(z);
  CHECK(jz.square_residual < 1e-10);
  CHECK(jz.omega_residual < 1e-10);
  CHECK(jz.compatible);

  ExteriorForm f = siegel_form(z);
  CHECK(coeff_norm(lefschetz_dual(f)) < 1e-10);

  // value on an integer frame [M; N] is det(M + ZN)
  Eigen::MatrixXd frame(2 * n, n);
  frame << 1, 2, 0, 1, 3, -1, 1, 0;
  Eigen::MatrixXcd zc = x.cast<Complex>() + Complex(0, 1) * y.cast<Complex>();
  Eigen::MatrixXcd m = frame.topRows(n).cast<Complex>();
  Eigen::MatrixXcd nn = frame.bottomRows(n).cast<Complex>();
  Complex want = (m + zc * nn).determinant();
  CHECK(std::abs(eval_on_frame(f, frame) - want) < 1e-10);

  SiegelPoint bad{x, -y};
  CHECK_THROWS_AS(siegel_complex_structure(bad), std::domain_error);
  CHECK_THROWS_AS(siegel_form(bad), std::domain_error);
}

TEST_CASE("hermitian pairing is conjugate symmetric with the right scale") {
  Rng rng(139);
  for (int n : {1, 2, 3}) {
    Complex diag = hermitian_pairing(dz_top(n), dz_top(n));
    CHECK(std::abs(diag - Complex(std::pow(2.0, n))) < 1e-12);

    ExteriorForm a = oracle::random_form(n, n, rng);
    ExteriorForm b = oracle::random_form(n, n, rng);
    Complex ab = hermitian_pairing(a, b);
    Complex ba = hermitian_pairing(b, a);
    CHECK(std::abs(ab - std::conj(ba)) < 1e-11);
    CHECK(std::abs(hermitian_pairing(a, a).imag()) < 1e-11);
  }

  // indefinite direction: Re(dz_1 ^ conj(dz_2)) at n = 2 has square -2
  ExteriorForm mixed = wedge(dz_form(2, 1), conj_form(dz_form(2, 2)));
  ExteriorForm alpha = real_part(mixed);
  CHECK(std::abs(hermitian_pairing(alpha, alpha) - Complex(-2)) < 1e-12);
}
