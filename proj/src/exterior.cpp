#include "lagdom/exterior.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace lagdom {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_space(int n, int dim_needed_bits) {
  require(n >= 1 && 2 * n <= dim_needed_bits, "half-dimension out of range");
}

template <typename T>
void check_mask(const T& f, Mask m) {
  require(m < (Mask(1) << f.dim()), "index outside {1..2n}");
  require(std::popcount(m) == f.degree, "tuple length != declared degree");
}

// Shared sparse-map wedge; sign from merge parity, exact zeros dropped.
std::map<Mask, Complex> wedge_maps(const std::map<Mask, Complex>& a,
                                   const std::map<Mask, Complex>& b) {
  std::map<Mask, Complex> out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      if (ma & mb) continue;
      Complex t = ca * cb * double(merge_sign(ma, mb));
      auto [it, fresh] = out.try_emplace(ma | mb, t);
      if (!fresh) it->second += t;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second == 0.0) it = out.erase(it);
    else ++it;
  }
  return out;
}

}  // namespace

int popcount_mask(Mask m) { return std::popcount(m); }

int merge_sign(Mask a, Mask b) {
  int inv = 0;
  Mask rest = b;
  while (rest) {
    int pos = std::countr_zero(rest);
    inv += std::popcount(a >> (pos + 1));
    rest &= rest - 1;
  }
  return (inv & 1) ? -1 : 1;
}

std::vector<Mask> masks_of_degree(int dim, int k) {
  std::vector<Mask> out;
  if (k < 0 || k > dim) return out;
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  Mask limit = Mask(1) << dim;
  Mask m = (Mask(1) << k) - 1;
  while (m < limit) {
    out.push_back(m);
    // Gosper's hack: next mask with the same popcount.
    Mask c = m & (~m + 1);
    Mask r = m + c;
    if (r >= limit) break;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

std::vector<int> mask_indices(Mask m) {
  std::vector<int> idx;
  while (m) {
    int pos = std::countr_zero(m);
    idx.push_back(pos + 1);
    m &= m - 1;
  }
  return idx;
}

Complex ExteriorForm::get(Mask m) const {
  auto it = coeff.find(m);
  return it == coeff.end() ? Complex(0.0) : it->second;
}

void ExteriorForm::set(Mask m, Complex c) {
  check_mask(*this, m);
  if (c == 0.0) coeff.erase(m);
  else coeff[m] = c;
}

void ExteriorForm::add(Mask m, Complex c) {
  check_mask(*this, m);
  auto [it, fresh] = coeff.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0.0) coeff.erase(it);
  } else if (c == 0.0) {
    coeff.erase(it);
  }
}

Complex Multivector::get(Mask m) const {
  auto it = coeff.find(m);
  return it == coeff.end() ? Complex(0.0) : it->second;
}

void Multivector::set(Mask m, Complex c) {
  check_mask(*this, m);
  if (c == 0.0) coeff.erase(m);
  else coeff[m] = c;
}

void Multivector::add(Mask m, Complex c) {
  check_mask(*this, m);
  auto [it, fresh] = coeff.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0.0) coeff.erase(it);
  } else if (c == 0.0) {
    coeff.erase(it);
  }
}

ExteriorForm operator+(const ExteriorForm& a, const ExteriorForm& b) {
  require(a.n == b.n && a.degree == b.degree, "mismatched spaces in +");
  ExteriorForm out = a;
  for (const auto& [m, c] : b.coeff) out.add(m, c);
  return out;
}

ExteriorForm operator-(const ExteriorForm& a, const ExteriorForm& b) {
  require(a.n == b.n && a.degree == b.degree, "mismatched spaces in -");
  ExteriorForm out = a;
  for (const auto& [m, c] : b.coeff) out.add(m, -c);
  return out;
}

ExteriorForm operator*(const Complex& z, const ExteriorForm& a) {
  ExteriorForm out(a.n, a.degree);
  if (z == 0.0) return out;
  for (const auto& [m, c] : a.coeff) out.coeff[m] = z * c;
  return out;
}

Multivector operator*(const Complex& z, const Multivector& w) {
  Multivector out(w.n, w.degree);
  if (z == 0.0) return out;
  for (const auto& [m, c] : w.coeff) out.coeff[m] = z * c;
  return out;
}

double coeff_norm(const ExteriorForm& a) {
  double s = 0;
  for (const auto& [m, c] : a.coeff) s += std::norm(c);
  return std::sqrt(s);
}

double coeff_norm(const Multivector& w) {
  double s = 0;
  for (const auto& [m, c] : w.coeff) s += std::norm(c);
  return std::sqrt(s);
}

Complex coeff_inner(const ExteriorForm& a, const ExteriorForm& b) {
  require(a.n == b.n && a.degree == b.degree, "mismatched spaces in inner");
  Complex s = 0;
  const auto& small = a.coeff.size() <= b.coeff.size() ? a.coeff : b.coeff;
  for (const auto& [m, c] : small) s += std::conj(a.get(m)) * b.get(m);
  return s;
}

ExteriorForm conj_form(const ExteriorForm& a) {
  ExteriorForm out(a.n, a.degree);
  for (const auto& [m, c] : a.coeff) out.coeff[m] = std::conj(c);
  return out;
}

ExteriorForm real_part(const ExteriorForm& a) {
  ExteriorForm out(a.n, a.degree);
  for (const auto& [m, c] : a.coeff)
    if (c.real() != 0.0) out.coeff[m] = Complex(c.real(), 0.0);
  return out;
}

ExteriorForm imag_part(const ExteriorForm& a) {
  ExteriorForm out(a.n, a.degree);
  for (const auto& [m, c] : a.coeff)
    if (c.imag() != 0.0) out.coeff[m] = Complex(c.imag(), 0.0);
  return out;
}

bool is_real(const ExteriorForm& a, double tol) {
  double s = 0;
  for (const auto& [m, c] : a.coeff) s += c.imag() * c.imag();
  return std::sqrt(s) <= tol;
}

ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b) {
  require(a.n == b.n, "mismatched spaces in wedge");
  ExteriorForm out(a.n, a.degree + b.degree);
  require(out.degree <= out.dim(), "wedge degree exceeds 2n");
  out.coeff = wedge_maps(a.coeff, b.coeff);
  return out;
}

Multivector wedge(const Multivector& v, const Multivector& w) {
  require(v.n == w.n, "mismatched spaces in wedge");
  Multivector out(v.n, v.degree + w.degree);
  require(out.degree <= out.dim(), "wedge degree exceeds 2n");
  out.coeff = wedge_maps(v.coeff, w.coeff);
  return out;
}

ExteriorForm contract(const Multivector& v, const ExteriorForm& a) {
  require(v.n == a.n, "mismatched spaces in contract");
  require(v.degree <= a.degree, "contraction degree exceeds form degree");
  ExteriorForm out(a.n, a.degree - v.degree);
  for (const auto& [mv, cv] : v.coeff) {
    for (const auto& [ma, ca] : a.coeff) {
      if ((mv & ma) != mv) continue;
      Mask rest = ma ^ mv;
      Complex t = cv * ca * double(merge_sign(mv, rest));
      out.add(rest, t);
    }
  }
  return out;
}

Complex evaluate(const ExteriorForm& a, const Multivector& w) {
  require(a.n == w.n, "mismatched spaces in evaluate");
  require(a.degree == w.degree, "evaluate needs equal degrees");
  Complex s = 0;
  if (a.coeff.size() <= w.coeff.size()) {
    for (const auto& [m, c] : a.coeff) s += c * w.get(m);
  } else {
    for (const auto& [m, c] : w.coeff) s += a.get(m) * c;
  }
  return s;
}

ExteriorForm lefschetz(const ExteriorForm& a) {
  return wedge(omega_form(a.n), a);
}

ExteriorForm lefschetz_dual(const ExteriorForm& a) {
  // omega has real +1 coefficients on the pair masks, so the adjoint of
  // (omega ^ .) in the coefficient inner product is
  //   (out)_I = sum_i sign(pair_i, I) a_{I u pair_i},  pair_i disjoint from I.
  if (a.degree < 2) return ExteriorForm(a.n, 0);
  ExteriorForm out(a.n, a.degree - 2);
  for (const auto& [m, c] : a.coeff) {
    for (int i = 1; i <= a.n; ++i) {
      Mask pair = (Mask(1) << (i - 1)) | (Mask(1) << (a.n + i - 1));
      if ((m & pair) != pair) continue;
      Mask rest = m ^ pair;
      out.add(rest, c * double(merge_sign(pair, rest)));
    }
  }
  return out;
}

namespace {

// Lambda^m L^j p = gamma(j,m,i) L^{j-m} p for primitive p of degree i,
// gamma = prod_{s=0}^{m-1} (j-s) (n - i - (j-s) + 1).
double gamma_coeff(int j, int m, int i, int n) {
  double p = 1.0;
  for (int s = 0; s < m; ++s)
    p *= double(j - s) * double(n - i - (j - s) + 1);
  return p;
}

std::vector<ExteriorForm> primitive_decompose_low(const ExteriorForm& a) {
  const int n = a.n, k = a.degree, M = k / 2;
  std::vector<ExteriorForm> pow(M + 1);
  pow[0] = a;
  for (int m = 1; m <= M; ++m) pow[m] = lefschetz_dual(pow[m - 1]);
  std::vector<ExteriorForm> comps(M + 1);
  for (int m = M; m >= 0; --m) {
    ExteriorForm rhs = pow[m];
    for (int j = m + 1; j <= M; ++j) {
      ExteriorForm t = comps[j];
      for (int s = 0; s < j - m; ++s) t = lefschetz(t);
      rhs = rhs - Complex(gamma_coeff(j, m, k - 2 * j, n)) * t;
    }
    double diag = gamma_coeff(m, m, k - 2 * m, n);
    comps[m] = Complex(1.0 / diag) * rhs;
  }
  return comps;
}

// Above middle degree the triangular diagonal can vanish; solve the
// equivalent exact system [sum_j L^j b_j = a, Lambda b_j = 0] instead.
std::vector<ExteriorForm> primitive_decompose_high(const ExteriorForm& a) {
  const int n = a.n, k = a.degree, M = k / 2, dim = 2 * n;
  std::vector<int> active;  // j with 0 <= k-2j <= n
  for (int j = 0; j <= M; ++j)
    if (k - 2 * j <= n) active.push_back(j);

  std::vector<std::vector<Mask>> basis(active.size());
  std::vector<int> offset(active.size());
  int cols = 0;
  for (size_t t = 0; t < active.size(); ++t) {
    basis[t] = masks_of_degree(dim, k - 2 * active[t]);
    offset[t] = cols;
    cols += int(basis[t].size());
  }
  auto top = masks_of_degree(dim, k);
  int rows = int(top.size());
  std::vector<std::vector<Mask>> cons(active.size());
  for (size_t t = 0; t < active.size(); ++t) {
    cons[t] = masks_of_degree(dim, k - 2 * active[t] - 2);
    rows += int(cons[t].size());
  }

  std::map<Mask, int> top_row;
  for (size_t r = 0; r < top.size(); ++r) top_row[top[r]] = int(r);

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(rows, cols);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(rows);
  for (const auto& [m, c] : a.coeff) rhs[top_row.at(m)] = c;

  for (size_t t = 0; t < active.size(); ++t) {
    int j = active[t];
    for (size_t b = 0; b < basis[t].size(); ++b) {
      ExteriorForm e(n, k - 2 * j);
      e.set(basis[t][b], 1.0);
      ExteriorForm lifted = e;
      for (int s = 0; s < j; ++s) lifted = lefschetz(lifted);
      for (const auto& [m, c] : lifted.coeff)
        A(top_row.at(m), offset[t] + int(b)) = c;
      ExteriorForm lam = lefschetz_dual(e);
      std::map<Mask, int> crow;
      // constraint rows for this t start after top rows and previous blocks
      int base = int(top.size());
      for (size_t u = 0; u < t; ++u) base += int(cons[u].size());
      for (size_t r = 0; r < cons[t].size(); ++r) crow[cons[t][r]] = base + int(r);
      for (const auto& [m, c] : lam.coeff)
        A(crow.at(m), offset[t] + int(b)) = c;
    }
  }

  Eigen::VectorXcd x = A.colPivHouseholderQr().solve(rhs);
  double resid = (A * x - rhs).norm();
  if (resid > 1e-8 * (1.0 + rhs.norm()))
    throw std::runtime_error("primitive decomposition solve failed");

  std::vector<ExteriorForm> comps(M + 1);
  for (int j = 0; j <= M; ++j) comps[j] = ExteriorForm(n, k - 2 * j);
  for (size_t t = 0; t < active.size(); ++t) {
    int j = active[t];
    for (size_t b = 0; b < basis[t].size(); ++b) {
      Complex c = x[offset[t] + int(b)];
      if (std::abs(c) > 1e-13 * (1.0 + coeff_norm(a)))
        comps[j].add(basis[t][b], c);
    }
  }
  return comps;
}

}  // namespace

std::vector<ExteriorForm> primitive_decompose(const ExteriorForm& a) {
  require(a.degree >= 0 && a.degree <= a.dim(), "degree out of range");
  if (a.degree <= a.n) return primitive_decompose_low(a);
  return primitive_decompose_high(a);
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long long primitive_dim(int n, int k) {
  return binomial(2 * n, k) - binomial(2 * n, k - 2);
}

Complex top_coefficient(const ExteriorForm& a) {
  require(a.degree == a.dim(), "top_coefficient needs a top-degree form");
  Mask full = (Mask(1) << a.dim()) - 1;
  ExteriorForm vol = omega_top(a.n);
  return a.get(full) / vol.get(full);
}

ExteriorForm scalar_form(int n, Complex c) {
  ExteriorForm out(n, 0);
  out.set(0, c);
  return out;
}

ExteriorForm basis_covector(int n, int index) {
  check_space(n, 32);
  require(index >= 1 && index <= 2 * n, "basis index out of range");
  ExteriorForm out(n, 1);
  out.set(Mask(1) << (index - 1), 1.0);
  return out;
}

Multivector scalar_multivector(int n, Complex c) {
  Multivector out(n, 0);
  out.set(0, c);
  return out;
}

Multivector basis_vector(int n, int index) {
  check_space(n, 32);
  require(index >= 1 && index <= 2 * n, "basis index out of range");
  Multivector out(n, 1);
  out.set(Mask(1) << (index - 1), 1.0);
  return out;
}

ExteriorForm omega_form(int n) {
  ExteriorForm out(n, 2);
  for (int i = 1; i <= n; ++i)
    out.set((Mask(1) << (i - 1)) | (Mask(1) << (n + i - 1)), 1.0);
  return out;
}

ExteriorForm omega_power(int n, int j) {
  ExteriorForm out = scalar_form(n, 1.0);
  for (int s = 0; s < j; ++s) out = wedge(omega_form(n), out);
  return out;
}

ExteriorForm omega_top(int n) {
  double nf = 1;
  for (int i = 2; i <= n; ++i) nf *= i;
  return Complex(1.0 / nf) * omega_power(n, n);
}

ExteriorForm dz_form(int n, int i) {
  ExteriorForm out = basis_covector(n, i);
  out.add(Mask(1) << (n + i - 1), Complex(0.0, 1.0));
  return out;
}

ExteriorForm dz_top(int n) {
  ExteriorForm out = scalar_form(n, 1.0);
  for (int i = 1; i <= n; ++i) out = wedge(out, dz_form(n, i));
  return out;
}

}  // namespace lagdom
