#include "lagdom/symplectic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lagdom {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

int half_dim_of(const Eigen::MatrixXd& g) {
  require(g.rows() == g.cols() && g.rows() % 2 == 0 && g.rows() >= 2,
          "matrix is not 2n x 2n");
  return int(g.rows()) / 2;
}

double minor_det(const Eigen::MatrixXd& g, const std::vector<int>& rows,
                 const std::vector<int>& cols) {
  const int k = int(rows.size());
  if (k == 1) return g(rows[0] - 1, cols[0] - 1);
  if (k == 2)
    return g(rows[0] - 1, cols[0] - 1) * g(rows[1] - 1, cols[1] - 1) -
           g(rows[0] - 1, cols[1] - 1) * g(rows[1] - 1, cols[0] - 1);
  Eigen::MatrixXd sub(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) sub(r, c) = g(rows[r] - 1, cols[c] - 1);
  return sub.determinant();
}

}  // namespace

Eigen::MatrixXd omega_gram(int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    m(i, n + i) = 1.0;
    m(n + i, i) = -1.0;
  }
  return m;
}

Eigen::MatrixXd standard_J(int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    m(i, n + i) = -1.0;
    m(n + i, i) = 1.0;
  }
  return m;
}

double symplectic_residual(const Eigen::MatrixXd& g) {
  int n = half_dim_of(g);
  Eigen::MatrixXd om = omega_gram(n);
  return (g.transpose() * om * g - om).norm();
}

bool is_symplectic(const Eigen::MatrixXd& g, double tol) {
  return symplectic_residual(g) <= tol * (1.0 + g.squaredNorm());
}

ExteriorForm pullback(const Eigen::MatrixXd& g, const ExteriorForm& a) {
  int n = half_dim_of(g);
  require(n == a.n, "matrix size does not match form space");
  if (a.degree == 0) return a;
  ExteriorForm out(a.n, a.degree);
  auto targets = masks_of_degree(a.dim(), a.degree);
  for (const auto& [mi, ci] : a.coeff) {
    auto rows = mask_indices(mi);
    for (Mask mj : targets) {
      auto cols = mask_indices(mj);
      double d = minor_det(g, rows, cols);
      if (d != 0.0) out.add(mj, ci * d);
    }
  }
  return out;
}

ExteriorForm group_act(const Eigen::MatrixXd& g, const ExteriorForm& a) {
  if (!is_symplectic(g, 1e-9))
    throw std::domain_error("group_act: matrix is not symplectic");
  return pullback(g, a);
}

ExteriorForm pullback_derivative(const Eigen::MatrixXd& x,
                                 const ExteriorForm& a) {
  int n = half_dim_of(x);
  require(n == a.n, "matrix size does not match form space");
  ExteriorForm out(a.n, a.degree);
  for (const auto& [m, c] : a.coeff) {
    for (int t : mask_indices(m)) {
      Mask tb = Mask(1) << (t - 1);
      Mask rest = m ^ tb;
      int eps = merge_sign(tb, rest);  // e^I = eps * e^t ^ e^rest
      for (int j = 1; j <= 2 * n; ++j) {
        double xv = x(t - 1, j - 1);
        if (xv == 0.0) continue;
        if (j == t) {
          out.add(m, c * xv);
        } else {
          Mask jb = Mask(1) << (j - 1);
          if (rest & jb) continue;
          out.add(rest | jb, c * xv * double(eps * merge_sign(jb, rest)));
        }
      }
    }
  }
  return out;
}

PolarCartan polar_cartan_decompose(const Eigen::MatrixXd& g) {
  int n = half_dim_of(g);
  (void)n;
  Eigen::MatrixXd p2 = g.transpose() * g;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p2);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("polar decomposition: eigensolver failed");
  Eigen::VectorXd lam = es.eigenvalues();
  if (lam.minCoeff() <= 0)
    throw std::domain_error("polar decomposition: singular input");
  Eigen::VectorXd logl = lam.array().log().matrix();
  Eigen::VectorXd isqrt = lam.array().rsqrt().matrix();
  const Eigen::MatrixXd& v = es.eigenvectors();
  PolarCartan out;
  out.x = 0.5 * v * logl.asDiagonal() * v.transpose();
  out.u = g * (v * isqrt.asDiagonal() * v.transpose());
  return out;
}

ComplexStructureData analyze_structure(const Eigen::MatrixXd& j) {
  int n = half_dim_of(j);
  ComplexStructureData out;
  out.j = j;
  out.square_residual =
      (j * j + Eigen::MatrixXd::Identity(2 * n, 2 * n)).norm();
  Eigen::MatrixXd om = omega_gram(n);
  out.omega_residual = (j.transpose() * om * j - om).norm();
  Eigen::MatrixXd metric = om * j;  // omega(e_i, J e_j)
  double asym = (metric - metric.transpose()).norm();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (metric + metric.transpose()));
  out.compatible = asym <= 1e-8 * (1.0 + metric.norm()) &&
                   es.eigenvalues().minCoeff() > 0;
  return out;
}

std::vector<ExteriorForm> type_decompose(const ExteriorForm& a,
                                         const Eigen::MatrixXd& j) {
  const int k = a.degree;
  const int n = a.n;
  require(half_dim_of(j) == n, "matrix size does not match form space");
  if (k == 0) return {a};
  const int cnt = k + 1;
  const double pi = std::numbers::pi_v<double>;
  // R_t^* acts on type (p, k-p) by e^{i(2p-k)t}; with t_m = pi m/(k+1) the
  // phases e^{2ipt_m} run over (k+1)-th roots of unity and invert as a DFT.
  std::vector<ExteriorForm> g(cnt);
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  for (int m = 0; m < cnt; ++m) {
    double t = pi * m / cnt;
    ExteriorForm f = pullback(std::cos(t) * id + std::sin(t) * j, a);
    g[m] = Complex(std::polar(1.0, k * t)) * f;
  }
  std::vector<ExteriorForm> out(cnt);
  for (int p = 0; p < cnt; ++p) {
    ExteriorForm acc(n, k);
    for (int m = 0; m < cnt; ++m) {
      Complex w = std::polar(1.0 / cnt, -2.0 * pi * p * m / cnt);
      acc = acc + w * g[m];
    }
    out[p] = acc;
  }
  return out;
}

namespace {

// Shared domain checks; returns the Cholesky factor of Y for reuse.
Eigen::LLT<Eigen::MatrixXd> validate_siegel(const SiegelPoint& z) {
  const auto& x = z.x;
  const auto& y = z.y;
  require(x.rows() == x.cols() && y.rows() == y.cols() && x.rows() == y.rows(),
          "Siegel point blocks must be square of equal size");
  if ((x - x.transpose()).norm() > 1e-10 * (1.0 + x.norm()) ||
      (y - y.transpose()).norm() > 1e-10 * (1.0 + y.norm()))
    throw std::domain_error("Siegel point blocks must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(y);
  if (llt.info() != Eigen::Success ||
      llt.matrixLLT().diagonal().minCoeff() <= 0)
    throw std::domain_error("Siegel point needs positive definite Y");
  return llt;
}

}  // namespace

ComplexStructureData siegel_complex_structure(const SiegelPoint& z) {
  const auto& x = z.x;
  const auto& y = z.y;
  Eigen::LLT<Eigen::MatrixXd> llt = validate_siegel(z);
  int n = int(x.rows());
  Eigen::MatrixXd yinv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  Eigen::MatrixXd j(2 * n, 2 * n);
  j.topLeftCorner(n, n) = -x * yinv;
  j.topRightCorner(n, n) = -y - x * yinv * x;
  j.bottomLeftCorner(n, n) = yinv;
  j.bottomRightCorner(n, n) = yinv * x;
  return analyze_structure(j);
}

ExteriorForm siegel_form(const SiegelPoint& z) {
  validate_siegel(z);
  int n = int(z.x.rows());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  a.topLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  a.topRightCorner(n, n) = z.x;
  a.bottomRightCorner(n, n) = z.y;
  return pullback(a, dz_top(n));
}

Complex hermitian_pairing(const ExteriorForm& a, const ExteriorForm& b) {
  require(a.n == b.n && a.degree == a.n && b.degree == b.n,
          "pairing needs middle-degree forms on the same space");
  int n = a.n;
  Complex f;  // i^n
  switch (n % 4) {
    case 0: f = 1.0; break;
    case 1: f = Complex(0, 1); break;
    case 2: f = -1.0; break;
    default: f = Complex(0, -1); break;
  }
  if ((n * (n + 1) / 2) % 2) f = -f;  // times (-1)^{n(n+1)/2}
  return f * top_coefficient(wedge(conj_form(a), b));
}

}  // namespace lagdom
