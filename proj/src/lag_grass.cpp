#include "lagdom/lag_grass.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lagdom/rng.hpp"

namespace lagdom {

namespace {

Eigen::MatrixXd j0_matrix(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    j(n + i, i) = 1.0;
    j(i, n + i) = -1.0;
  }
  return j;
}

void gather_rows(const Eigen::MatrixXd& frame, Mask mask, Eigen::MatrixXd& sub) {
  int r = 0;
  for (int i = 0; i < frame.rows(); ++i)
    if (mask & (Mask(1) << i)) sub.row(r++) = frame.row(i);
}

}  // namespace

double isotropy_residual(const Eigen::MatrixXd& frame) {
  const int n = int(frame.rows()) / 2;
  Eigen::MatrixXd om = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    om(i, n + i) = 1.0;
    om(n + i, i) = -1.0;
  }
  return (frame.transpose() * om * frame).norm();
}

bool is_lagrangian_frame(const Eigen::MatrixXd& frame, double tol) {
  if (frame.rows() != 2 * frame.cols()) return false;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(frame);
  if (qr.rank() != frame.cols()) return false;
  return isotropy_residual(frame) <= tol * (1.0 + frame.squaredNorm());
}

Multivector decomposable_from_frame(const Eigen::MatrixXd& frame) {
  const int rows = int(frame.rows());
  const int k = int(frame.cols());
  if (rows % 2 != 0 || k > rows)
    throw std::invalid_argument("decomposable_from_frame: bad frame shape");
  Multivector out(rows / 2, k);
  Eigen::MatrixXd sub(k, k);
  for (Mask m : masks_of_degree(rows, k)) {
    gather_rows(frame, m, sub);
    const double d = sub.determinant();
    if (d != 0.0) out.coeff[m] = d;
  }
  return out;
}

Complex eval_on_frame(const ExteriorForm& a, const Eigen::MatrixXd& frame) {
  if (frame.rows() != 2 * a.n || frame.cols() != a.degree)
    throw std::invalid_argument("eval_on_frame: frame shape does not match form");
  Complex out = 0;
  Eigen::MatrixXd sub(a.degree, a.degree);
  for (const auto& [mask, c] : a.coeff) {
    gather_rows(frame, mask, sub);
    out += c * sub.determinant();
  }
  return out;
}

LagrangianFrame sample_lagrangian(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXcd g = rng.gaussian_complex_matrix(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd r =
      qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  // Fix column phases so the distribution is Haar, not QR-convention biased.
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  LagrangianFrame out;
  out.f.resize(2 * n, n);
  out.f.topRows(n) = q.real();
  out.f.bottomRows(n) = q.imag();
  return out;
}

namespace {

Eigen::MatrixXd rotated(const Eigen::MatrixXd& frame, const Eigen::MatrixXd& j0,
                        double theta) {
  return std::cos(theta) * frame + std::sin(theta) * (j0 * frame);
}

// Phase increment from za to zb, bisecting until each step stays under pi/2.
double unwrap_step(const ExteriorForm& a, const Eigen::MatrixXd& frame,
                   const Eigen::MatrixXd& j0, double ta, Complex za, double tb,
                   Complex zb, double floor_abs, int depth) {
  const double d = std::arg(zb / za);
  if (std::abs(d) <= std::numbers::pi / 2) return d;
  if (depth >= 20)
    throw std::domain_error(
        "loop_winding: phase step did not resolve under bisection");
  const double tm = 0.5 * (ta + tb);
  const Complex zm = eval_on_frame(a, rotated(frame, j0, tm));
  if (std::abs(zm) < floor_abs)
    throw std::domain_error("loop_winding: loop value vanishes");
  return unwrap_step(a, frame, j0, ta, za, tm, zm, floor_abs, depth + 1) +
         unwrap_step(a, frame, j0, tm, zm, tb, zb, floor_abs, depth + 1);
}

}  // namespace

int loop_winding(const ExteriorForm& a, const Eigen::MatrixXd& frame,
                 int samples) {
  if (a.degree != a.n)
    throw std::invalid_argument("loop_winding: form must have middle degree");
  if (frame.rows() != 2 * a.n || frame.cols() != a.n)
    throw std::invalid_argument("loop_winding: frame shape does not match form");
  if (samples < 4) samples = 4;

  const double scale = coeff_norm(a);
  if (scale == 0.0) throw std::domain_error("loop_winding: zero form");
  const double floor_abs = 1e-13 * scale;
  const Eigen::MatrixXd j0 = j0_matrix(a.n);
  const double two_pi = 2 * std::numbers::pi;

  std::vector<double> t(samples + 1);
  std::vector<Complex> z(samples + 1);
  for (int k = 0; k <= samples; ++k) {
    t[k] = two_pi * k / samples;
    z[k] = eval_on_frame(a, rotated(frame, j0, t[k]));
    if (std::abs(z[k]) < floor_abs)
      throw std::domain_error("loop_winding: loop value vanishes");
  }

  double total = 0;
  for (int k = 0; k < samples; ++k)
    total += unwrap_step(a, frame, j0, t[k], z[k], t[k + 1], z[k + 1],
                         floor_abs, 0);

  const int w = int(std::lround(total / two_pi));
  if (std::abs(total - two_pi * w) > 1e-6)
    throw std::domain_error(
        "loop_winding: total increment is not a multiple of 2pi");
  return w;
}

namespace {

// Chart around the unitary u0: s packs a symmetric S (upper triangle, row
// major), the point is u0 * exp(iS) and its frame [Re; Im].
Eigen::MatrixXcd chart_point(const Eigen::MatrixXcd& u0,
                             const Eigen::VectorXd& s) {
  const int n = int(u0.rows());
  Eigen::MatrixXd sm(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      sm(i, j) = s[k];
      sm(j, i) = s[k];
      ++k;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sm);
  Eigen::VectorXcd ph(n);
  for (int i = 0; i < n; ++i)
    ph[i] = std::exp(Complex(0, es.eigenvalues()[i]));
  const Eigen::MatrixXcd v = es.eigenvectors().cast<Complex>();
  return u0 * (v * ph.asDiagonal() * v.transpose());
}

Eigen::MatrixXd frame_of_unitary(const Eigen::MatrixXcd& u) {
  const int n = int(u.rows());
  Eigen::MatrixXd f(2 * n, n);
  f.topRows(n) = u.real();
  f.bottomRows(n) = u.imag();
  return f;
}

struct DescentResult {
  double value = 0;
  Eigen::MatrixXd frame;
  double grad_residual = 0;
};

DescentResult descend(const ExteriorForm& a, Eigen::MatrixXcd u, int max_iter) {
  const int n = a.n;
  const int dim = n * (n + 1) / 2;
  const double h = 1e-5;
  const double scale2 = coeff_norm(a) * coeff_norm(a);

  auto sq_at = [&](const Eigen::VectorXd& s) {
    const Complex v = eval_on_frame(a, frame_of_unitary(chart_point(u, s)));
    return std::norm(v);
  };

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(dim);
  double f0 = sq_at(zero);
  double grad_norm = 0;

  for (int it = 0; it < max_iter; ++it) {
    if (f0 < 1e-18 * scale2) break;
    Eigen::VectorXd g(dim);
    for (int k = 0; k < dim; ++k) {
      Eigen::VectorXd sp = zero, sm = zero;
      sp[k] = h;
      sm[k] = -h;
      g[k] = (sq_at(sp) - sq_at(sm)) / (2 * h);
    }
    grad_norm = g.norm();
    if (grad_norm < 1e-9 * (1.0 + scale2)) break;

    double step = 1.0;
    bool moved = false;
    while (step > 1e-14) {
      const Eigen::VectorXd s = -step * g;
      const double f1 = sq_at(s);
      if (f1 <= f0 - 1e-4 * step * grad_norm * grad_norm) {
        u = chart_point(u, s);
        f0 = f1;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }

  DescentResult out;
  out.value = std::sqrt(f0);
  out.frame = frame_of_unitary(u);
  out.grad_residual = grad_norm;
  return out;
}

}  // namespace

MinAbsResult min_abs_on_lgr(const ExteriorForm& a, std::uint64_t seed,
                            int restarts, int max_iter) {
  if (a.degree != a.n)
    throw std::invalid_argument("min_abs_on_lgr: form must have middle degree");
  if (restarts < 1) restarts = 1;

  MinAbsResult best;
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    LagrangianFrame start = sample_lagrangian(a.n, seed ^ std::uint64_t(r));
    Eigen::MatrixXcd u =
        start.f.topRows(a.n).cast<Complex>() +
        Complex(0, 1) * start.f.bottomRows(a.n).cast<Complex>();
    DescentResult res = descend(a, u, max_iter);
    if (!have || res.value < best.value) {
      best.value = res.value;
      best.frame = res.frame;
      best.grad_residual = res.grad_residual;
      best.best_restart = r;
      have = true;
    }
  }
  return best;
}

}  // namespace lagdom
