#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace lagdom {

using Complex = std::complex<double>;

// V = R^{2n} with ordered basis e_1..e_{2n}, where e_i = d/dx_i for i <= n and
// e_{n+i} = d/dy_i. The symplectic form is omega = sum_i dx_i ^ dy_i.
//
// A strictly increasing index tuple {i_1 < ... < i_k} subset of {1..2n} is
// stored as a bitmask with bit (i-1) set for index i. Coefficient maps are
// keyed by mask, ascending, which fixes a deterministic term order everywhere
// (serialization, Pluecker coordinates, iteration).
using Mask = std::uint32_t;

int popcount_mask(Mask m);

// Sign of e_A ^ e_B relative to the sorted union, A and B disjoint:
// parity of #{(a,b) in A x B : a > b}.
int merge_sign(Mask a, Mask b);

// All masks over {1..dim} of the given popcount, ascending as integers
// (= lexicographic on the reversed tuple; used as the canonical basis order).
std::vector<Mask> masks_of_degree(int dim, int k);

std::vector<int> mask_indices(Mask m);  // 1-based indices, ascending

struct ExteriorForm {
  int n = 0;       // half-dimension of V
  int degree = 0;  // homogeneous degree k
  std::map<Mask, Complex> coeff;

  ExteriorForm() = default;
  ExteriorForm(int n_, int degree_) : n(n_), degree(degree_) {}

  int dim() const { return 2 * n; }
  Complex get(Mask m) const;
  void set(Mask m, Complex c);
  void add(Mask m, Complex c);
};

// Contravariant counterpart (polyvectors); same storage conventions.
struct Multivector {
  int n = 0;
  int degree = 0;
  std::map<Mask, Complex> coeff;

  Multivector() = default;
  Multivector(int n_, int degree_) : n(n_), degree(degree_) {}

  int dim() const { return 2 * n; }
  Complex get(Mask m) const;
  void set(Mask m, Complex c);
  void add(Mask m, Complex c);
};

ExteriorForm operator+(const ExteriorForm& a, const ExteriorForm& b);
ExteriorForm operator-(const ExteriorForm& a, const ExteriorForm& b);
ExteriorForm operator*(const Complex& z, const ExteriorForm& a);
Multivector operator*(const Complex& z, const Multivector& w);

double coeff_norm(const ExteriorForm& a);   // sqrt(sum |c_I|^2)
double coeff_norm(const Multivector& w);
Complex coeff_inner(const ExteriorForm& a, const ExteriorForm& b);  // sum conj(a_I) b_I
ExteriorForm conj_form(const ExteriorForm& a);
ExteriorForm real_part(const ExteriorForm& a);
ExteriorForm imag_part(const ExteriorForm& a);
bool is_real(const ExteriorForm& a, double tol);

ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b);
Multivector wedge(const Multivector& v, const Multivector& w);

// Left interior product v |_ a, defined by (v |_ a)(w) = a(v ^ w).
ExteriorForm contract(const Multivector& v, const ExteriorForm& a);

// Full pairing of a k-form with a k-polyvector (dual bases, no factorials).
Complex evaluate(const ExteriorForm& a, const Multivector& w);

ExteriorForm lefschetz(const ExteriorForm& a);       // omega ^ a
ExteriorForm lefschetz_dual(const ExteriorForm& a);  // adjoint of lefschetz
                                                     // w.r.t. the coefficient
                                                     // inner product

// a = sum_j omega^j ^ out[j], out[j] primitive of degree k-2j. out has
// floor(k/2)+1 entries; entries whose degree exceeds n are zero.
std::vector<ExteriorForm> primitive_decompose(const ExteriorForm& a);

long long primitive_dim(int n, int k);  // C(2n,k) - C(2n,k-2)
long long binomial(int n, int k);

// Coefficient c with a = c * omega^n/n!, for degree-2n forms.
Complex top_coefficient(const ExteriorForm& a);

// Builders.
ExteriorForm scalar_form(int n, Complex c);
ExteriorForm basis_covector(int n, int index);       // e^index, 1-based
Multivector scalar_multivector(int n, Complex c);
Multivector basis_vector(int n, int index);
ExteriorForm omega_form(int n);
ExteriorForm omega_power(int n, int j);              // omega^j, not normalized
ExteriorForm omega_top(int n);                       // omega^n / n!
ExteriorForm dz_form(int n, int i);                  // dz_i = dx_i + i dy_i
ExteriorForm dz_top(int n);                          // dz_1 ^ ... ^ dz_n

}  // namespace lagdom
