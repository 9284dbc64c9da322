#include "lagdom/u_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "lagdom/lag_grass.hpp"

namespace lagdom {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void demand(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

constexpr std::uint64_t kMembershipSeed = 0x5EED0001ull;

void check_middle(const ExteriorForm& a, const char* who) {
  require(a.degree == a.n, who);
}

// Relative primitivity gate shared by the membership-facing entry points.
void demand_primitive(const ExteriorForm& a) {
  double scale = coeff_norm(a);
  if (scale == 0) return;
  demand(coeff_norm(lefschetz_dual(a)) <= 1e-10 * scale,
         "not_primitive: form has a nonzero omega-trace");
}

Eigen::MatrixXd exp_sym(const Eigen::MatrixXd& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
  return es.eigenvectors() *
         es.eigenvalues().array().exp().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

// Basis of the symmetric part of sp(2n): [[A,0],[0,-A]] and [[0,B],[B,0]]
// with A, B running over elementary symmetric matrices. n(n+1) directions.
std::vector<Eigen::MatrixXd> git_directions(int n) {
  std::vector<Eigen::MatrixXd> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
      s(i, j) = s(j, i) = 1.0;
      Eigen::MatrixXd da = Eigen::MatrixXd::Zero(2 * n, 2 * n);
      da.topLeftCorner(n, n) = s;
      da.bottomRightCorner(n, n) = -s;
      out.push_back(da);
      Eigen::MatrixXd db = Eigen::MatrixXd::Zero(2 * n, 2 * n);
      db.topRightCorner(n, n) = s;
      db.bottomLeftCorner(n, n) = s;
      out.push_back(db);
    }
  }
  return out;
}

Multivector column_multivector(int n, const Eigen::VectorXd& v) {
  Multivector out(n, 1);
  for (int t = 0; t < 2 * n; ++t)
    if (v[t] != 0.0) out.set(Mask(1) << t, v[t]);
  return out;
}

int winding_sign(const ExteriorForm& omega) {
  const int n = omega.n;
  int w = loop_winding(omega, sample_lagrangian(n, kMembershipSeed).f);
  if (w != n && w != -n) return 0;
  return w > 0 ? 1 : -1;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::member: return "member";
    case Verdict::non_member: return "non_member";
    default: return "inconclusive";
  }
}

const char* to_string(Certificate c) {
  switch (c) {
    case Certificate::exact_n1: return "exact_n1";
    case Certificate::exact_n2: return "exact_n2";
    case Certificate::necessary_n3_plus_numeric:
      return "necessary_n3_plus_numeric";
    default: return "numeric_only";
  }
}

const char* to_string(Geometricity g) {
  switch (g) {
    case Geometricity::geometric: return "geometric";
    case Geometricity::almost_geometric: return "almost_geometric";
    case Geometricity::plain: return "plain";
    default: return "unknown";
  }
}

SMatrixData s_matrix(const ExteriorForm& omega) {
  require(omega.n == 2 && omega.degree == 2, "s_matrix needs a 2-form on R^4");
  demand_primitive(omega);
  ExteriorForm re = real_part(omega);
  ExteriorForm im = imag_part(omega);
  auto pair = [](const ExteriorForm& a, const ExteriorForm& b) {
    return top_coefficient(wedge(a, b)).real();
  };
  SMatrixData out;
  out.s << pair(re, re), pair(re, im), pair(re, im), pair(im, im);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(out.s);
  double lo = std::sqrt(std::max(es.eigenvalues()[0], 0.0) / 2.0);
  double hi = std::sqrt(std::max(es.eigenvalues()[1], 0.0) / 2.0);
  out.r = (hi + lo) / 2.0;
  out.c_abs = (hi - lo) / 2.0;
  return out;
}

QInvariants q_invariants(const ExteriorForm& alpha) {
  require(alpha.n == 3 && alpha.degree == 3,
          "q_invariants needs a 3-form on R^6");
  demand(is_real(alpha, 1e-9 * (1.0 + coeff_norm(alpha))),
         "q_needs_real_input");
  const ExteriorForm om = omega_form(3);
  std::vector<ExteriorForm> cut;
  cut.reserve(6);
  for (int i = 1; i <= 6; ++i) cut.push_back(contract(basis_vector(3, i), alpha));
  QInvariants out;
  out.q.resize(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) {
      double v = top_coefficient(wedge(wedge(cut[i], cut[j]), om)).real();
      out.q(i, j) = out.q(j, i) = v;
    }
  out.k = omega_gram(3) * out.q;
  out.d = out.k.determinant();
  return out;
}

LoopPolynomial loop_polynomial(const ExteriorForm& omega,
                               const Eigen::MatrixXd& j,
                               const Eigen::MatrixXd& frame, double tol) {
  check_middle(omega, "loop_polynomial needs a middle-degree form");
  ComplexStructureData jd = analyze_structure(j);
  require(jd.compatible && jd.square_residual < 1e-6,
          "loop_polynomial needs a compatible structure");
  require(is_lagrangian_frame(frame),
          "loop_polynomial needs a Lagrangian frame");
  const int n = omega.n;
  std::vector<ExteriorForm> comps = type_decompose(omega, j);
  LoopPolynomial out;
  out.coeffs.resize(n + 1);
  double top = 0;
  for (int k = 0; k <= n; ++k) {
    out.coeffs[k] = eval_on_frame(comps[k], frame);
    top = std::max(top, std::abs(out.coeffs[k]));
  }
  demand(top > tol * std::max(coeff_norm(omega), 1e-300),
         "degenerate_loop_polynomial");
  int deg = n;
  while (deg > 0 && std::abs(out.coeffs[deg]) <= tol * top) --deg;
  if (deg > 0) {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int k = 0; k < deg; ++k) {
      comp(k, deg - 1) = -out.coeffs[k] / out.coeffs[deg];
      if (k + 1 < deg) comp(k + 1, k) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
    for (int k = 0; k < deg; ++k) out.roots.push_back(es.eigenvalues()[k]);
    std::sort(out.roots.begin(), out.roots.end(), [](Complex a, Complex b) {
      if (a.real() != b.real()) return a.real() < b.real();
      return a.imag() < b.imag();
    });
    for (const Complex& r : out.roots)
      out.max_root_abs = std::max(out.max_root_abs, std::abs(r));
  }
  out.in_disk = (deg == n) && (out.max_root_abs < 1.0);
  return out;
}

ExteriorForm retraction_path(const ExteriorForm& omega,
                             const Eigen::MatrixXd& j, double t,
                             bool validate) {
  check_middle(omega, "retraction_path needs a middle-degree form");
  require(t >= 0.0 && t <= 1.0, "retraction_path needs t in [0,1]");
  ComplexStructureData jd = analyze_structure(j);
  require(jd.compatible && jd.square_residual < 1e-6,
          "retraction_path needs a compatible structure");
  if (validate) {
    MembershipReport rep = is_member(omega, 1e-6, false);
    demand(rep.verdict == Verdict::member && rep.sign == 1,
           "not_plus_component");
  }
  const int n = omega.n;
  std::vector<ExteriorForm> comps = type_decompose(omega, j);
  ExteriorForm out(omega.n, omega.degree);
  for (int p = 0; p <= n; ++p)
    out = out + Complex(std::pow(t, n - p), 0.0) * comps[p];
  return out;
}

GitResult git_minimize(const ExteriorForm& omega, int max_iter, double tol) {
  check_middle(omega, "git_minimize needs a middle-degree form");
  const int n = omega.n;
  const int dim = 2 * n;
  const std::vector<Eigen::MatrixXd> dirs = git_directions(n);

  GitResult out;
  out.minimal = omega;
  out.g = Eigen::MatrixXd::Identity(dim, dim);
  ExteriorForm phi = omega;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(dim, dim);
  double f0 = coeff_norm(phi);
  f0 *= f0;
  if (f0 == 0) {
    out.norm_history.push_back(0.0);
    out.j = analyze_structure(standard_J(n));
    out.converged = true;
    return out;
  }

  double f = f0;
  out.norm_history.push_back(f0);
  double step_init = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    if (f < 1e-12 * f0) {
      out.diverged = true;
      break;
    }
    Eigen::VectorXd grad(dirs.size());
    for (std::size_t m = 0; m < dirs.size(); ++m)
      grad[m] =
          2.0 * coeff_inner(phi, pullback_derivative(dirs[m], phi)).real();
    double gnorm = grad.norm();
    out.grad_residual = gnorm;
    // Scale-invariant test: on escaping orbits the gradient and the norm
    // decay together, so an absolute threshold would fire spuriously.
    if (gnorm <= tol * f) {
      out.converged = true;
      break;
    }
    // Unit descent direction so progress does not stall as the norm decays;
    // the slope along it is exactly -gnorm.
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t m = 0; m < dirs.size(); ++m)
      x -= (grad[m] / gnorm) * dirs[m];
    double step = step_init;
    bool accepted = false;
    for (int ls = 0; ls < 60 && step > 1e-15; ++ls) {
      Eigen::MatrixXd step_g = exp_sym(step * x);
      ExteriorForm cand = pullback(step_g, phi);
      double fc = coeff_norm(cand);
      fc *= fc;
      if (fc <= f - 1e-4 * step * gnorm) {
        phi = cand;
        acc = acc * step_g;
        f = fc;
        out.norm_history.push_back(f);
        accepted = true;
        ++out.iterations;
        step_init = std::min(1.0, 2.0 * step);
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // line search stalled at the resolution floor
  }

  if (!out.converged && !out.diverged) {
    Eigen::VectorXd grad(dirs.size());
    for (std::size_t m = 0; m < dirs.size(); ++m)
      grad[m] =
          2.0 * coeff_inner(phi, pullback_derivative(dirs[m], phi)).real();
    out.grad_residual = grad.norm();
    out.converged = out.grad_residual <= tol * f;
  }

  out.minimal = phi;
  out.g = acc.inverse();
  out.achieved_sq_norm = f;
  // The minimizing structure g^{-1} J0 g, with g = acc^{-1}.
  out.j = analyze_structure(acc * standard_J(n) * out.g);
  return out;
}

GeometricityReport classify_geometricity(const ExteriorForm& omega,
                                         double tol) {
  GeometricityReport out;
  out.git = git_minimize(omega);
  if (out.git.diverged) return out;
  const int n = omega.n;
  std::vector<ExteriorForm> comps =
      type_decompose(out.git.minimal, standard_J(n));
  double out_geom = 0, out_ag = 0;
  for (int p = 0; p < n; ++p) {
    double c = coeff_norm(comps[p]);
    out_geom += c * c;
    if (p > 0) out_ag += c * c;
  }
  out.residual_geometric = std::sqrt(out_geom);
  out.residual_ag = std::sqrt(out_ag);
  double scale = coeff_norm(out.git.minimal);
  if (out.residual_geometric <= tol * scale)
    out.kind = Geometricity::geometric;
  else if (out.residual_ag <= tol * scale)
    out.kind = Geometricity::almost_geometric;
  else
    out.kind = Geometricity::plain;
  return out;
}

HitchinResult hitchin_partner(const ExteriorForm& alpha) {
  HitchinResult out;
  out.qinv = q_invariants(alpha);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.qinv.q);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().cwiseAbs().maxCoeff();
  demand(lo > 0 && lo > 1e-12 * hi, "q_not_positive_definite");
  demand(out.qinv.d > 0, "q_not_positive_definite");
  Eigen::MatrixXd jm = out.qinv.k / std::pow(out.qinv.d, 1.0 / 6.0);
  if ((omega_gram(3) * jm).trace() < 0) jm = -jm;
  out.j = analyze_structure(jm);
  demand(out.j.compatible && out.j.square_residual < 1e-6,
         "hitchin_structure_failed");
  std::vector<ExteriorForm> comps = type_decompose(alpha, jm);
  ExteriorForm beta = 2.0 * imag_part(comps[3]);
  out.omega = alpha + Complex(0, 1) * beta;
  std::vector<ExteriorForm> oc = type_decompose(out.omega, jm);
  double off = 0;
  for (int p = 0; p < 3; ++p) {
    double c = coeff_norm(oc[p]);
    off += c * c;
  }
  out.type_residual = std::sqrt(off) / coeff_norm(out.omega);
  return out;
}

namespace {

// Complex Gram-Schmidt for a compatible structure jm: returns a symplectic
// matrix whose columns [v | jm v] form a unitary basis, so the conjugated
// structure is exactly J0. Candidates are taken from the standard basis.
Eigen::MatrixXd unitary_basis(const Eigen::MatrixXd& jm) {
  const int dim = int(jm.rows());
  const int n = dim / 2;
  const Eigen::MatrixXd om = omega_gram(n);
  const Eigen::MatrixXd metric = om * jm;
  auto herm = [&](const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
    return Complex(v.dot(metric * w), v.dot(om * w));
  };
  std::vector<Eigen::VectorXd> vs;
  for (int cand = 0; cand < dim && int(vs.size()) < n; ++cand) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(dim, cand);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : vs) {
        Complex c = herm(u, v);
        v -= c.real() * u + c.imag() * (jm * u);
      }
    double len = herm(v, v).real();
    if (len < 1e-10) continue;
    vs.push_back(v / std::sqrt(len));
  }
  require(int(vs.size()) == n, "unitary basis construction failed");
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < n; ++i) {
    g.col(i) = vs[i];
    g.col(n + i) = jm * vs[i];
  }
  return g;
}

}  // namespace

NormalFormU3 normal_form_u3(const ExteriorForm& omega) {
  require(omega.n == 3 && omega.degree == 3,
          "normal_form_u3 needs a 3-form on R^6");
  MembershipReport rep = is_member(omega, 1e-6, false);
  demand(rep.verdict == Verdict::member, "not_member");

  // Stage 1: the structure of the real part becomes J0, making the real
  // part a multiple of Re(dz1^dz2^dz3).
  HitchinResult h1 = hitchin_partner(real_part(omega));
  Eigen::MatrixXd g1 = unitary_basis(h1.j.j);
  ExteriorForm phi = pullback(g1, omega);

  // Stage 2: the structure of the imaginary part, written as J2 in the new
  // coordinates; B = Om J2 is its metric, with eigenvalues paired (mu, 1/mu)
  // and B J0 = J0 B^{-1}. Eigenvectors for mu < 1 plus a complex
  // Gram-Schmidt pass through the unit block give a J0-unitary u that
  // diagonalizes B as diag(lambda, 1/lambda), lambda ascending in (0, 1].
  HitchinResult h2 = hitchin_partner(imag_part(phi));
  const Eigen::MatrixXd om = omega_gram(3);
  const Eigen::MatrixXd j0 = standard_J(3);
  Eigen::MatrixXd b = om * h2.j.j;
  b = 0.5 * (b + b.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  demand(es.eigenvalues().minCoeff() > 0, "normal_form_pairing_failed");

  const double band = 1e-8;
  std::vector<Eigen::VectorXd> ws;
  std::vector<double> lambdas;
  std::vector<Eigen::VectorXd> unit_block;
  for (int k = 0; k < 6; ++k) {
    double mu = es.eigenvalues()[k];
    if (mu < 1.0 - band) {
      ws.push_back(es.eigenvectors().col(k));
      lambdas.push_back(mu);
    } else if (mu <= 1.0 + band) {
      unit_block.push_back(es.eigenvectors().col(k));
    }
  }
  demand(unit_block.size() % 2 == 0 &&
             ws.size() + unit_block.size() / 2 == 3,
         "normal_form_pairing_failed");
  std::vector<Eigen::VectorXd> unit_ws;
  for (const auto& cand0 : unit_block) {
    if (unit_ws.size() == unit_block.size() / 2) break;
    Eigen::VectorXd v = cand0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : unit_ws) {
        Complex c(u.dot(v), u.dot(om * v));
        v -= c.real() * u + c.imag() * (j0 * u);
      }
    if (v.norm() < 1e-6) continue;
    unit_ws.push_back(v / v.norm());
  }
  demand(unit_ws.size() == unit_block.size() / 2,
         "normal_form_pairing_failed");
  for (const auto& w : unit_ws) {
    ws.push_back(w);
    lambdas.push_back(1.0);
  }

  Eigen::MatrixXd u(6, 6);
  for (int i = 0; i < 3; ++i) {
    u.col(i) = ws[i];
    u.col(3 + i) = j0 * ws[i];
  }
  ExteriorForm phi2 = pullback(u, phi);
  Eigen::MatrixXd g_total = g1 * u;

  NormalFormU3 out;
  out.lambda = Eigen::Vector3d(lambdas[0], lambdas[1], lambdas[2]);

  std::vector<ExteriorForm> re_comps =
      type_decompose(real_part(phi2), j0);
  out.c1 = 2.0 * re_comps[3].get(0b000111);
  // Joint sign convention: arg(c1) in [0, pi), with a band so that noise
  // straddling the negative real axis cannot leave the sign unnormalized.
  const double axis_band = 1e-12 * std::abs(out.c1);
  if (out.c1.imag() < -axis_band ||
      (out.c1.imag() <= axis_band && out.c1.real() < 0)) {
    // One joint sign flip is realized by the symplectic map -I.
    g_total = -g_total;
    phi2 = Complex(-1, 0) * phi2;
    out.c1 = -out.c1;
  }
  ExteriorForm im2 = imag_part(phi2);
  double lam_prod = out.lambda.prod();
  out.c2 = Complex(-im2.get(0b111000).real(),
                   im2.get(0b000111).real() / lam_prod);
  out.g = g_total;

  ExteriorForm nf = normal_form_u3_form(out.c1, out.c2, out.lambda);
  out.residual = coeff_norm(phi2 - nf) / coeff_norm(phi2);
  demand(out.residual <= 1e-6, "normal_form_reconstruction_failed");
  return out;
}

ExteriorForm normal_form_u3_form(Complex c1, Complex c2,
                                 const Eigen::Vector3d& lambda) {
  require(lambda.minCoeff() > 0, "lambda entries must be positive");
  ExteriorForm theta = scalar_form(3, 1.0);
  for (int k = 1; k <= 3; ++k) {
    ExteriorForm leg = Complex(lambda[k - 1], 0) * basis_covector(3, k) +
                       Complex(0, 1) * basis_covector(3, 3 + k);
    theta = wedge(theta, leg);
  }
  return real_part(c1 * dz_top(3)) +
         Complex(0, 1) * imag_part(c2 * theta);
}

ExteriorForm reduce(const ExteriorForm& omega, const Eigen::MatrixXd& w,
                    const Multivector& nu) {
  const int n = omega.n;
  const int dim = 2 * n;
  require(omega.degree == n, "reduce needs a middle-degree form");
  require(w.rows() == dim && w.cols() >= 1 && w.cols() <= dim,
          "frame shape does not match the form space");
  const int codim = dim - int(w.cols());
  require(codim < n, "reduction to a point is not supported");
  require(nu.n == n && nu.degree == codim,
          "nu degree must equal the frame codimension");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(w);
  require(lu.rank() == w.cols(), "frame must have full rank");

  const Eigen::MatrixXd om = omega_gram(n);
  Multivector nu0 = scalar_multivector(n, 1.0);
  Eigen::MatrixXd perp(dim, 0);
  if (codim > 0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu_perp((w.transpose() * om).eval());
    perp = lu_perp.kernel();
    demand(int(perp.cols()) == codim, "not_coisotropic");

    // Coisotropy: the symplectic complement must sit inside the span of w.
    for (int c = 0; c < perp.cols(); ++c) {
      Eigen::VectorXd k = perp.col(c);
      Eigen::VectorXd sol = w.colPivHouseholderQr().solve(k);
      demand((w * sol - k).norm() <= 1e-9 * k.norm(), "not_coisotropic");
    }

    // nu must span Det(w-perp): parallel to the wedge of a kernel basis.
    for (int c = 0; c < perp.cols(); ++c)
      nu0 = wedge(nu0, column_multivector(n, perp.col(c)));
  }
  Complex cross = 0;
  for (const auto& [m, v] : nu0.coeff) cross += std::conj(v) * nu.get(m);
  double nn = coeff_norm(nu), nn0 = coeff_norm(nu0);
  demand(nn > 0 && std::abs(cross) >= (1.0 - 1e-9) * nn * nn0,
         "nu_does_not_span_complement");

  ExteriorForm cut = contract(nu, omega);

  // Greedy symplectic Gram-Schmidt over the columns of w; kernel directions
  // fall out because they pair to ~0 with everything in w.
  const int m_out = n - codim;
  std::vector<Eigen::VectorXd> cols;
  for (int c = 0; c < w.cols(); ++c) cols.push_back(w.col(c));
  std::vector<bool> used(cols.size(), false);
  std::vector<Eigen::VectorXd> as, bs;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (used[i]) continue;
    Eigen::VectorXd v = cols[i];
    if (v.norm() < 1e-12) continue;
    int best = -1;
    double best_val = 0;
    for (std::size_t k = i + 1; k < cols.size(); ++k) {
      if (used[k]) continue;
      double val = std::abs(v.dot(om * cols[k]));
      if (val > best_val) {
        best_val = val;
        best = int(k);
      }
    }
    if (best < 0 || best_val < 1e-10 * v.norm() * cols[best].norm()) continue;
    Eigen::VectorXd b = cols[best] / v.dot(om * cols[best]);
    used[i] = used[best] = true;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (used[k]) continue;
      double cb = cols[k].dot(om * b);   // omega(c, b)
      double ac = v.dot(om * cols[k]);   // omega(a, c)
      cols[k] -= cb * v + ac * b;
    }
    as.push_back(v);
    bs.push_back(b);
  }
  demand(int(as.size()) == m_out, "not_coisotropic");

  ExteriorForm out(m_out, m_out);
  Eigen::MatrixXd chart(dim, 2 * m_out);
  for (int i = 0; i < m_out; ++i) {
    chart.col(i) = as[i];
    chart.col(m_out + i) = bs[i];
  }
  for (Mask m : masks_of_degree(2 * m_out, m_out)) {
    Eigen::MatrixXd sub(dim, m_out);
    int c = 0;
    for (int idx : mask_indices(m)) sub.col(c++) = chart.col(idx - 1);
    Complex val = eval_on_frame(cut, sub);
    if (val != 0.0) out.set(m, val);
  }
  return out;
}

ExteriorForm product_form(const ExteriorForm& omega1,
                          const ExteriorForm& omega2) {
  const int n1 = omega1.n, n2 = omega2.n, n = n1 + n2;
  auto remap = [n](const ExteriorForm& a, int x_off, int nf) {
    ExteriorForm out(n, a.degree);
    for (const auto& [m, c] : a.coeff) {
      Mask nm = 0;
      for (int idx : mask_indices(m)) {
        // x_i -> x_(i+off), y_i -> y_(i+off); monotone, so no sign.
        int ni = idx <= nf ? x_off + idx : n + x_off + (idx - nf);
        nm |= Mask(1) << (ni - 1);
      }
      out.set(nm, c);
    }
    return out;
  };
  return wedge(remap(omega1, 0, n1), remap(omega2, n1, n2));
}

double vol_ratio(const ExteriorForm& omega, double* imag_residual) {
  check_middle(omega, "vol_ratio needs a middle-degree form");
  const int n = omega.n;
  static const Complex i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Complex factor = i_pow[n % 4] * std::pow(0.5, n);
  if ((n * (n - 1) / 2) % 2 != 0) factor = -factor;
  Complex val = factor * top_coefficient(wedge(omega, conj_form(omega)));
  if (imag_residual) *imag_residual = std::abs(val.imag());
  return val.real();
}

MembershipReport is_member(const ExteriorForm& omega, double tol,
                           bool classify) {
  check_middle(omega, "membership needs a middle-degree form");
  const int n = omega.n;
  const double scale = coeff_norm(omega);
  MembershipReport rep;
  rep.certificate = n == 1   ? Certificate::exact_n1
                    : n == 2 ? Certificate::exact_n2
                    : n == 3 ? Certificate::necessary_n3_plus_numeric
                             : Certificate::numeric_only;
  if (scale == 0) {
    rep.verdict = Verdict::non_member;
    return rep;
  }
  demand_primitive(omega);

  if (n == 1) {
    // As a real-linear map V -> C the form is a 2x2 matrix; membership is
    // invertibility, the sign is the orientation, and sigma_min is exactly
    // the minimum over the unit circle (= LGr(1)).
    Eigen::Matrix2d m;
    Complex a1 = omega.get(0b01), a2 = omega.get(0b10);
    m << a1.real(), a2.real(), a1.imag(), a2.imag();
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
    rep.margin = svd.singularValues()[1];
    if (rep.margin > 1e-14 * svd.singularValues()[0]) {
      rep.verdict = Verdict::member;
      rep.sign = m.determinant() > 0 ? 1 : -1;
    } else {
      rep.verdict = Verdict::non_member;
    }
  } else if (n == 2) {
    SMatrixData sd = s_matrix(omega);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sd.s);
    rep.margin = es.eigenvalues()[0];
    if (rep.margin > 0) {
      try {
        int s = winding_sign(omega);
        if (s != 0) {
          rep.verdict = Verdict::member;
          rep.sign = s;
        } else {
          rep.verdict = Verdict::inconclusive;
        }
      } catch (const std::domain_error&) {
        rep.verdict = Verdict::inconclusive;  // boundary-level noise
      }
    } else {
      rep.verdict = Verdict::non_member;
    }
  } else {
    if (n == 3) {
      // Positive definiteness of q for both real parts is necessary.
      ExteriorForm re = real_part(omega), im = imag_part(omega);
      for (const ExteriorForm* part : {&re, &im}) {
        QInvariants qi = q_invariants(*part);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(qi.q);
        double lo = es.eigenvalues().minCoeff();
        double hi = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
        if (lo <= 1e-12 * hi) {
          rep.verdict = Verdict::non_member;
          rep.margin = lo;
          return rep;
        }
      }
    }
    MinAbsResult mr = min_abs_on_lgr(omega, kMembershipSeed, 32, 300);
    rep.margin = mr.value;
    rep.threshold = tol * scale;
    if (mr.value > rep.threshold) {
      try {
        int s = winding_sign(omega);
        rep.verdict = s != 0 ? Verdict::member : Verdict::inconclusive;
        rep.sign = s;
      } catch (const std::domain_error&) {
        rep.verdict = Verdict::inconclusive;
      }
    } else if (mr.value < rep.threshold / 10.0) {
      rep.verdict = Verdict::non_member;
    } else {
      rep.verdict = Verdict::inconclusive;
    }
  }

  if (classify && rep.verdict == Verdict::member) {
    GeometricityReport gr = classify_geometricity(omega);
    rep.geometricity = gr.kind;
    rep.geometricity_residual = gr.kind == Geometricity::geometric
                                    ? gr.residual_geometric
                                    : gr.residual_ag;
  }
  return rep;
}

}  // namespace lagdom
