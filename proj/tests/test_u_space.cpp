#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lagdom/exterior.hpp"
#include "lagdom/lag_grass.hpp"
#include "lagdom/rng.hpp"
#include "lagdom/symplectic.hpp"
#include "lagdom/u_space.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lagdom;
using testutil::random_symplectic;

namespace {

// Canonical two-component representative on R^4: r dz1^dz2 + c conj.
ExteriorForm canonical2(double r, Complex c) {
  return Complex(r, 0) * dz_top(2) + c * conj_form(dz_top(2));
}

ExteriorForm primitive_part(const ExteriorForm& a) {
  return primitive_decompose(a)[0];
}

}  // namespace

TEST_CASE("s_matrix entries and parameter recovery on canonical forms") {
  const double r = 1.25;
  const Complex c(0.3, 0.2);
  SMatrixData sd = s_matrix(canonical2(r, c));
  const double cc = std::abs(c);
  Eigen::Matrix2d want;
  want << 2 * (r * r + cc * cc) + 4 * r * c.real(), 4 * r * c.imag(),
      4 * r * c.imag(), 2 * (r * r + cc * cc) - 4 * r * c.real();
  CHECK((sd.s - want).norm() < 1e-12);
  CHECK(sd.r == doctest::Approx(r).epsilon(1e-12));
  CHECK(sd.c_abs == doctest::Approx(cc).epsilon(1e-12));

  SMatrixData plain = s_matrix(dz_top(2));
  CHECK((plain.s - 2.0 * Eigen::Matrix2d::Identity()).norm() < 1e-12);

  // The eigenvalue pair is symmetric in r <-> |c|; recovery picks r >= |c|.
  SMatrixData swapped = s_matrix(canonical2(0.3, Complex(1.0, 0)));
  CHECK(swapped.r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(swapped.c_abs == doctest::Approx(0.3).epsilon(1e-12));

  Rng rng(71);
  Eigen::MatrixXd g = random_symplectic(2, rng);
  SMatrixData moved = s_matrix(pullback(g, canonical2(r, c)));
  CHECK(moved.r == doctest::Approx(r).epsilon(1e-9));
  CHECK(moved.c_abs == doctest::Approx(cc).epsilon(1e-9));

  CHECK_THROWS_AS(s_matrix(omega_form(2)), std::domain_error);
}

TEST_CASE("q invariants match the dense oracle and scale as lambda^12") {
  Rng rng(72);
  for (int rep = 0; rep < 12; ++rep) {
    ExteriorForm a = real_part(oracle::random_form(3, 3, rng));
    QInvariants qi = q_invariants(a);
    CHECK((qi.q - oracle::q_matrix_dense(a)).norm() < 1e-9);
    CHECK((qi.k - omega_gram(3) * qi.q).norm() == 0.0);
    CHECK((qi.k.transpose() * omega_gram(3) - qi.q).norm() < 1e-12);

    QInvariants scaled = q_invariants(Complex(2, 0) * a);
    CHECK(scaled.d == doctest::Approx(4096.0 * qi.d).epsilon(1e-10));

    Eigen::MatrixXd g = random_symplectic(3, rng);
    QInvariants moved = q_invariants(pullback(g, a));
    CHECK((moved.q - g.transpose() * qi.q * g).norm() <
          1e-9 * (1.0 + qi.q.norm()));
    CHECK(moved.d == doctest::Approx(qi.d).epsilon(1e-8));
  }

  QInvariants ref = q_invariants(real_part(dz_top(3)));
  CHECK((ref.q - 2.0 * Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-12);

  CHECK_THROWS_AS(q_invariants(dz_top(3)), std::domain_error);  // not real
}

TEST_CASE("membership n=1: orientation decides the component") {
  MembershipReport plus = is_member(dz_form(1, 1));
  CHECK(plus.verdict == Verdict::member);
  CHECK(plus.sign == 1);
  CHECK(plus.certificate == Certificate::exact_n1);
  CHECK(plus.margin == doctest::Approx(1.0));
  CHECK(plus.geometricity == Geometricity::geometric);

  MembershipReport minus = is_member(conj_form(dz_form(1, 1)));
  CHECK(minus.verdict == Verdict::member);
  CHECK(minus.sign == -1);

  MembershipReport degenerate = is_member(basis_covector(1, 1));
  CHECK(degenerate.verdict == Verdict::non_member);
  CHECK(degenerate.margin == doctest::Approx(0.0));
}

TEST_CASE("membership n=2: S matrix verdict, winding sign, geometricity") {
  Rng rng(73);
  ExteriorForm member = canonical2(1.25, Complex(0.3, 0.2));
  MembershipReport rep = is_member(member);
  CHECK(rep.verdict == Verdict::member);
  CHECK(rep.sign == 1);
  CHECK(rep.certificate == Certificate::exact_n2);
  CHECK(rep.margin > 0);
  CHECK(rep.geometricity == Geometricity::almost_geometric);

  MembershipReport repc = is_member(conj_form(member));
  CHECK(repc.verdict == Verdict::member);
  CHECK(repc.sign == -1);

  MembershipReport geo = is_member(pullback(random_symplectic(2, rng),
                                            Complex(0.7, 0.4) * dz_top(2)));
  CHECK(geo.verdict == Verdict::member);
  CHECK(geo.sign == 1);
  CHECK(geo.geometricity == Geometricity::geometric);

  // dz1 ^ conj(dz2) pairs to -2 against itself, so S fails definiteness.
  ExteriorForm cross = wedge(dz_form(2, 1), conj_form(dz_form(2, 2)));
  MembershipReport repx = is_member(cross);
  CHECK(repx.verdict == Verdict::non_member);
  CHECK(repx.margin < 0);

  ExteriorForm xx = wedge(basis_covector(2, 1), basis_covector(2, 2));
  CHECK(is_member(xx).verdict == Verdict::non_member);

  CHECK_THROWS_AS(is_member(omega_form(2)), std::domain_error);
}

TEST_CASE("membership n=3: q gates plus the numeric Lagrangian minimum") {
  MembershipReport rep = is_member(dz_top(3), 1e-6, false);
  CHECK(rep.verdict == Verdict::member);
  CHECK(rep.sign == 1);
  CHECK(rep.certificate == Certificate::necessary_n3_plus_numeric);
  CHECK(rep.margin == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(rep.threshold == doctest::Approx(1e-6 * coeff_norm(dz_top(3))));

  ExteriorForm ag = dz_top(3) + Complex(0.25, 0) * conj_form(dz_top(3));
  MembershipReport rep_ag = is_member(ag, 1e-6, false);
  CHECK(rep_ag.verdict == Verdict::member);
  CHECK(rep_ag.margin == doctest::Approx(0.75).epsilon(1e-6));

  MembershipReport repm = is_member(conj_form(dz_top(3)), 1e-6, false);
  CHECK(repm.verdict == Verdict::member);
  CHECK(repm.sign == -1);

  // Fails the q gate before any numerics.
  ExteriorForm xs = wedge(wedge(basis_covector(3, 1), basis_covector(3, 2)),
                          basis_covector(3, 3));
  MembershipReport repx = is_member(xs);
  CHECK(repx.verdict == Verdict::non_member);

  // Boundary-distance scaling: margin is 1-|eps| for dZ + eps conj(dZ).
  ExteriorForm near = dz_top(3) + Complex(0.999, 0) * conj_form(dz_top(3));
  MembershipReport repn = is_member(near, 1e-6, false);
  CHECK(repn.margin == doctest::Approx(0.001).epsilon(1e-3));
}

TEST_CASE("loop polynomial: coefficients, roots, and the loop identity") {
  const ExteriorForm mixed = dz_top(3) + Complex(2, 0) * conj_form(dz_top(3));
  Eigen::MatrixXd frame(6, 3);
  frame << Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Zero(3, 3);
  LoopPolynomial lp = loop_polynomial(mixed, standard_J(3), frame);
  REQUIRE(lp.coeffs.size() == 4);
  CHECK(std::abs(lp.coeffs[3] - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(lp.coeffs[0] - Complex(2, 0)) < 1e-12);
  CHECK(std::abs(lp.coeffs[1]) < 1e-12);
  CHECK(!lp.in_disk);
  CHECK(lp.max_root_abs == doctest::Approx(std::pow(2.0, 1.0 / 3.0)));

  LoopPolynomial pure = loop_polynomial(dz_top(3), standard_J(3), frame);
  CHECK(pure.in_disk);
  CHECK(pure.max_root_abs == doctest::Approx(0.0));

  // omega(e^{it} w) = e^{-int} p(e^{2it}).
  Rng rng(74);
  ExteriorForm member = pullback(random_symplectic(3, rng), dz_top(3));
  Eigen::MatrixXd f = sample_lagrangian(3, 975).f;
  LoopPolynomial lpm = loop_polynomial(member, standard_J(3), f);
  CHECK(lpm.in_disk);
  for (double t : {0.3, 1.1, 2.0, 4.4}) {
    Eigen::MatrixXd rot =
        std::cos(t) * Eigen::MatrixXd::Identity(6, 6) + std::sin(t) * standard_J(3);
    Complex lhs = eval_on_frame(member, rot * f);
    Complex z = std::polar(1.0, 2.0 * t);
    Complex p = 0;
    for (int k = 3; k >= 0; --k) p = p * z + lpm.coeffs[k];
    Complex rhs = std::polar(1.0, -3.0 * t) * p;
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }

  // Members of the minus component fail on every frame.
  LoopPolynomial lpc =
      loop_polynomial(conj_form(member), standard_J(3), f);
  CHECK(!lpc.in_disk);

  // A plane on which every type component vanishes is degenerate.
  ExteriorForm dxdy = wedge(basis_covector(2, 1), basis_covector(2, 3));
  Eigen::MatrixXd bad(4, 2);
  bad.setZero();
  bad(1, 0) = 1;  // d/dx2
  bad(2, 1) = 1;  // d/dy1
  CHECK_THROWS_AS(loop_polynomial(dxdy, standard_J(2), bad),
                  std::domain_error);
}

TEST_CASE("retraction path scales type components and stays in U^+") {
  Rng rng(75);
  Eigen::MatrixXd g = random_symplectic(2, rng);
  ExteriorForm member = pullback(g, canonical2(1.0, Complex(0.35, -0.1)));
  Eigen::MatrixXd j = g.inverse() * standard_J(2) * g;

  ExteriorForm at1 = retraction_path(member, j, 1.0);
  CHECK(coeff_norm(at1 - member) < 1e-10 * coeff_norm(member));

  ExteriorForm at0 = retraction_path(member, j, 0.0);
  std::vector<ExteriorForm> comps = type_decompose(member, j);
  CHECK(coeff_norm(at0 - comps[2]) < 1e-10 * coeff_norm(member));

  for (double t : {0.25, 0.5, 0.8}) {
    ExteriorForm at = retraction_path(member, j, t);
    std::vector<ExteriorForm> ct = type_decompose(at, j);
    for (int p = 0; p <= 2; ++p)
      CHECK(coeff_norm(ct[p] - Complex(std::pow(t, 2 - p), 0) * comps[p]) <
            1e-9 * coeff_norm(member));
    MembershipReport rep = is_member(at, 1e-6, false);
    CHECK(rep.verdict == Verdict::member);
    CHECK(rep.sign == 1);
  }

  CHECK_THROWS_AS(retraction_path(conj_form(member), j, 0.5),
                  std::domain_error);
}

TEST_CASE("git minimize recovers the orbit minimum and flags divergence") {
  MembershipReport quick = is_member(dz_top(2), 1e-6, false);
  CHECK(quick.verdict == Verdict::member);

  GitResult at_min = git_minimize(dz_top(3));
  CHECK(at_min.converged);
  CHECK(at_min.iterations == 0);
  CHECK(at_min.achieved_sq_norm == doctest::Approx(8.0));

  Rng rng(76);
  for (int rep = 0; rep < 5; ++rep) {
    int n = 2 + (rep % 2);
    Eigen::MatrixXd g0 = random_symplectic(n, rng);
    ExteriorForm moved = pullback(g0, dz_top(n));
    GitResult res = git_minimize(moved);
    CHECK(res.converged);
    CHECK(!res.diverged);
    CHECK(res.achieved_sq_norm ==
          doctest::Approx(std::pow(2.0, n)).epsilon(1e-7));
    CHECK(coeff_norm(pullback(res.g, res.minimal) - moved) <
          1e-6 * coeff_norm(moved));
    CHECK(res.j.compatible);
    CHECK(is_symplectic(res.g, 1e-7));
  }

  ExteriorForm unstable =
      wedge(basis_covector(2, 1), basis_covector(2, 2));
  GitResult div = git_minimize(unstable, 3000);
  CHECK(div.diverged);
}

TEST_CASE("geometricity classification on transported representatives") {
  Rng rng(77);
  Eigen::MatrixXd g2 = random_symplectic(2, rng);
  GeometricityReport geo =
      classify_geometricity(pullback(g2, Complex(0.9, 0.2) * dz_top(2)));
  CHECK(geo.kind == Geometricity::geometric);
  CHECK(geo.residual_geometric < 1e-6);

  GeometricityReport ag =
      classify_geometricity(pullback(g2, canonical2(1.0, Complex(0.4, 0.1))));
  CHECK(ag.kind == Geometricity::almost_geometric);
  CHECK(ag.residual_geometric > 0.1);

  GeometricityReport minus = classify_geometricity(conj_form(dz_top(3)));
  CHECK(minus.kind == Geometricity::almost_geometric);
}

TEST_CASE("hitchin partner rebuilds the structure of a real slice") {
  Rng rng(78);
  for (int rep = 0; rep < 8; ++rep) {
    Complex c(rng.gaussian(), rng.gaussian());
    if (std::abs(c) < 0.1) c += 1.0;
    Eigen::MatrixXd g = random_symplectic(3, rng);
    ExteriorForm alpha = pullback(g, real_part(c * dz_top(3)));
    HitchinResult h = hitchin_partner(alpha);
    Eigen::MatrixXd want_j = g.inverse() * standard_J(3) * g;
    CHECK((h.j.j - want_j).norm() < 1e-8 * (1.0 + want_j.norm()));
    CHECK(h.j.compatible);
    CHECK(coeff_norm(real_part(h.omega) - alpha) == 0.0);
    CHECK(h.type_residual < 1e-9);
    CHECK(coeff_norm(h.omega - pullback(g, c * dz_top(3))) <
          1e-8 * std::abs(c));
  }

  ExteriorForm xs = wedge(wedge(basis_covector(3, 1), basis_covector(3, 2)),
                          basis_covector(3, 3));
  CHECK_THROWS_AS(hitchin_partner(xs), std::domain_error);
}

TEST_CASE("normal form on R^6: roundtrip, edge forms, and preconditions") {
  // Coefficient distance to dZ is ~0.81 < 1, so membership is guaranteed
  // with margin >= 0.19. The lambda are distinct and away from 1, which
  // pins the recovered (c1, c2) up to the joint sign fixed by arg(c1).
  const Complex c1 = std::polar(1.0, 0.25);
  const Complex c2 = std::polar(1.0, 0.15);
  const Eigen::Vector3d lam(0.92, 0.95, 0.98);
  ExteriorForm model = normal_form_u3_form(c1, c2, lam);
  CHECK(is_member(model, 1e-6, false).verdict == Verdict::member);

  Rng rng(79);
  for (int rep = 0; rep < 4; ++rep) {
    Eigen::MatrixXd g0 = random_symplectic(3, rng, 0.3);
    ExteriorForm moved = pullback(g0, model);
    NormalFormU3 nf = normal_form_u3(moved);
    CHECK((nf.lambda - lam).norm() < 1e-7);
    CHECK(std::abs(nf.c1 - c1) < 1e-7);
    CHECK(std::abs(nf.c2 - c2) < 1e-7);
    CHECK(nf.residual < 1e-8);
    CHECK(coeff_norm(pullback(nf.g, moved) -
                     normal_form_u3_form(nf.c1, nf.c2, nf.lambda)) <
          1e-7 * coeff_norm(moved));
    CHECK(is_symplectic(nf.g, 1e-8));
  }

  NormalFormU3 pure = normal_form_u3(dz_top(3));
  CHECK((pure.lambda - Eigen::Vector3d::Ones()).norm() < 1e-9);
  CHECK(std::abs(pure.c1 * pure.c2 - Complex(1, 0)) < 1e-9);
  CHECK(pure.residual < 1e-10);

  NormalFormU3 anti = normal_form_u3(conj_form(dz_top(3)));
  CHECK((anti.lambda - Eigen::Vector3d::Ones()).norm() < 1e-9);
  CHECK(std::abs(anti.c1 * anti.c2 + Complex(1, 0)) < 1e-9);

  // dZ + (1/4)dZbar splits as Re(1.25 dZ) + i Im(0.75 dZ); the structure
  // stages reduce to the identity, so the coefficients come out exactly.
  NormalFormU3 agnf = normal_form_u3(
      dz_top(3) + Complex(0.25, 0.0) * conj_form(dz_top(3)));
  CHECK((agnf.lambda - Eigen::Vector3d::Ones()).norm() < 1e-9);
  CHECK(std::abs(agnf.c1 - Complex(1.25, 0)) < 1e-9);
  CHECK(std::abs(agnf.c2 - Complex(0.75, 0)) < 1e-9);

  ExteriorForm xs = wedge(wedge(basis_covector(3, 1), basis_covector(3, 2)),
                          basis_covector(3, 3));
  CHECK_THROWS_AS(normal_form_u3(xs), std::domain_error);
}

TEST_CASE("reduction along a coisotropic frame") {
  const Complex c1(1.0, 0.5), c2(0.2, -0.3);
  ExteriorForm omega = c1 * dz_top(3) + c2 * conj_form(dz_top(3));

  // Drop d/dy1; the complement is spanned by d/dx1 and the quotient chart
  // comes out as (x2, x3, y2, y3).
  Eigen::MatrixXd w(6, 5);
  w.setZero();
  int cols[5] = {0, 1, 2, 4, 5};
  for (int c = 0; c < 5; ++c) w(cols[c], c) = 1.0;
  ExteriorForm red = reduce(omega, w, basis_vector(3, 1));
  ExteriorForm want = c1 * dz_top(2) + c2 * conj_form(dz_top(2));
  CHECK(oracle::max_coeff_diff(red, want) < 1e-12);
  CHECK(is_member(red, 1e-6, false).verdict == Verdict::member);

  // Identity frame reduces nothing.
  ExteriorForm same = reduce(omega, Eigen::MatrixXd::Identity(6, 6),
                             scalar_multivector(3, 1.0));
  CHECK(oracle::max_coeff_diff(same, omega) == 0.0);

  // Scaling nu scales the output.
  ExteriorForm red2 = reduce(omega, w, 2.0 * basis_vector(3, 1));
  CHECK(oracle::max_coeff_diff(red2, Complex(2, 0) * red) < 1e-12);

  // (x1, y1, x2, y2) is symplectic, not coisotropic.
  Eigen::MatrixXd bad(6, 4);
  bad.setZero();
  bad(0, 0) = bad(3, 1) = bad(1, 2) = bad(4, 3) = 1.0;
  CHECK_THROWS_AS(
      reduce(omega, bad, wedge(basis_vector(3, 3), basis_vector(3, 6))),
      std::domain_error);

  // nu must span the complement.
  CHECK_THROWS_AS(reduce(omega, w, basis_vector(3, 2)), std::domain_error);
}

TEST_CASE("products embed factors side by side") {
  CHECK(oracle::max_coeff_diff(product_form(dz_form(1, 1), dz_form(1, 1)),
                               dz_top(2)) == 0.0);

  ExteriorForm p3 = product_form(dz_top(2), dz_form(1, 1));
  CHECK(oracle::max_coeff_diff(p3, dz_top(3)) == 0.0);

  Rng rng(80);
  ExteriorForm a = canonical2(1.1, Complex(0.2, 0.25));
  ExteriorForm b = dz_form(1, 1) + Complex(0.3, 0.1) * conj_form(dz_form(1, 1));
  ExteriorForm prod = product_form(pullback(random_symplectic(2, rng), a), b);
  CHECK(prod.n == 3);
  MembershipReport rep = is_member(prod, 1e-6, false);
  CHECK(rep.verdict == Verdict::member);
  CHECK(rep.sign == 1);

  // Mixed components annihilate: dz1 x conj(dz1) vanishes on a Lagrangian.
  ExteriorForm mixed = product_form(dz_form(1, 1), conj_form(dz_form(1, 1)));
  CHECK(is_member(mixed).verdict == Verdict::non_member);
}

TEST_CASE("volume ratio against the holomorphic calibration") {
  for (int n : {1, 2, 3}) {
    double resid = -1;
    CHECK(vol_ratio(dz_top(n), &resid) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(resid < 1e-14);
  }
  CHECK(vol_ratio(Complex(0, 2) * dz_top(3)) == doctest::Approx(4.0));
  CHECK(vol_ratio(conj_form(dz_top(2))) == doctest::Approx(1.0));
  CHECK(vol_ratio(conj_form(dz_top(3))) == doctest::Approx(-1.0));

  for (double eps : {0.2, 0.6}) {
    ExteriorForm ag2 = dz_top(2) + Complex(eps, 0) * conj_form(dz_top(2));
    CHECK(vol_ratio(ag2) == doctest::Approx(1.0 + eps * eps));
    ExteriorForm ag3 = dz_top(3) + Complex(0, eps) * conj_form(dz_top(3));
    CHECK(vol_ratio(ag3) == doctest::Approx(1.0 - eps * eps));
  }

  Rng rng(81);
  ExteriorForm moved = pullback(random_symplectic(3, rng), dz_top(3));
  CHECK(vol_ratio(moved) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("membership is equivariant under the symplectic action") {
  Rng rng(82);
  for (int rep = 0; rep < 6; ++rep) {
    ExteriorForm a = primitive_part(oracle::random_form(2, 2, rng));
    MembershipReport before = is_member(a, 1e-6, false);
    MembershipReport after =
        is_member(pullback(random_symplectic(2, rng), a), 1e-6, false);
    if (before.verdict == Verdict::inconclusive ||
        after.verdict == Verdict::inconclusive)
      continue;
    CHECK(before.verdict == after.verdict);
    if (before.verdict == Verdict::member) CHECK(before.sign == after.sign);
  }
}
