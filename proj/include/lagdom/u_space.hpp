#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lagdom/exterior.hpp"
#include "lagdom/symplectic.hpp"

namespace lagdom {

// Membership machinery for the open set of primitive middle-degree complex
// forms that vanish on no Lagrangian subspace, with its two components
// (phase winding +n / -n).

enum class Verdict { member, non_member, inconclusive };
enum class Certificate {
  exact_n1,
  exact_n2,
  necessary_n3_plus_numeric,
  numeric_only
};
enum class Geometricity { geometric, almost_geometric, plain, unknown };

const char* to_string(Verdict v);
const char* to_string(Certificate c);
const char* to_string(Geometricity g);

struct MembershipReport {
  Verdict verdict = Verdict::inconclusive;
  int sign = 0;        // +1 / -1 for members, 0 otherwise
  double margin = 0;   // sigma_min (n=1), min eig of S (n=2), LGr minimum
  double threshold = 0;  // numeric acceptance threshold actually used
  Certificate certificate = Certificate::numeric_only;
  Geometricity geometricity = Geometricity::unknown;
  double geometricity_residual = 0;
};

// verdict rules: n=1 exact (the form as a map V -> C is invertible; sign =
// orientation), n=2 exact (S matrix positive definite), n=3 necessary
// positive-definiteness tests on q of both real parts plus a numeric
// Lagrangian minimum, n>=4 numeric only. The numeric branch accepts at
// margin > tol * |coeffs|, rejects below a tenth of that, and is
// inconclusive in between. Throws std::domain_error on non-primitive input.
// Deterministic: the numeric minimization uses a fixed internal seed.
MembershipReport is_member(const ExteriorForm& omega, double tol = 1e-6,
                           bool classify = true);

struct SMatrixData {
  Eigen::Matrix2d s;   // pairings of (re, im) against omega^2/2
  double r = 0;        // canonical parameters, r >= |c| >= 0
  double c_abs = 0;    // eigenvalues of s are 2 (r +- |c|)^2
};
SMatrixData s_matrix(const ExteriorForm& omega);  // n = 2 only

struct QInvariants {
  Eigen::MatrixXd q;  // q(v, w) omega^3/3! = (v |_ a) ^ (w |_ a) ^ omega
  Eigen::MatrixXd k;  // omega(K v, w) = q(v, w)
  double d = 0;       // det K; scales as lambda^12 under a -> lambda a
};
QInvariants q_invariants(const ExteriorForm& alpha);  // real 3-form, n = 3

struct LoopPolynomial {
  std::vector<Complex> coeffs;  // a_k = component with k holomorphic legs at F
  std::vector<Complex> roots;
  bool in_disk = false;  // degree n and all roots strictly inside |z| < 1
  double max_root_abs = 0;
};
// The loop value factors as omega(e^{it} w) = e^{-int} p(e^{2it}); members of
// the + component have deg p = n with all roots in the open unit disk, on
// every frame. Throws std::domain_error when p is identically ~0 on F.
LoopPolynomial loop_polynomial(const ExteriorForm& omega,
                               const Eigen::MatrixXd& j,
                               const Eigen::MatrixXd& frame, double tol = 1e-12);

// Scales the component with k holomorphic legs by t^{n-k}; t=1 is the
// identity, t=0 keeps only the top-holomorphic part. Requires a + component
// member and a compatible j; stays in the + component for t in [0,1].
ExteriorForm retraction_path(const ExteriorForm& omega,
                             const Eigen::MatrixXd& j, double t,
                             bool validate = true);

struct GitResult {
  ExteriorForm minimal;      // norm-minimizing transported form
  Eigen::MatrixXd g;         // symplectic; omega = pullback(g, minimal)
  ComplexStructureData j;    // j.j = g^{-1} J0 g, the minimizing structure
  double achieved_sq_norm = 0;   // squared coefficient norm of minimal
  std::vector<double> norm_history;  // squared norms, input then accepted steps
  double grad_residual = 0;
  int iterations = 0;
  bool converged = false;
  bool diverged = false;  // norm collapsed toward 0: suspected non-member
};

// Minimizes the squared coefficient norm over the symplectic orbit by
// gradient descent in exp charts of Sp/U(n) (directions [[A,B],[B,-A]] with
// A, B symmetric), Armijo backtracking from step 1. The norm sequence is
// non-increasing by construction. Convergence means grad <= tol * norm^2;
// tolerances much below 1e-7 are unreachable in double precision.
GitResult git_minimize(const ExteriorForm& omega, int max_iter = 500,
                       double tol = 1e-6);

struct GeometricityReport {
  Geometricity kind = Geometricity::unknown;
  double residual_geometric = 0;  // mass outside the top-holomorphic type
  double residual_ag = 0;         // mass outside the two extreme types
  GitResult git;
};
// Classifies by the type decomposition of the GIT-minimal form relative to
// its own norm: components are measured against tol * |minimal|.
GeometricityReport classify_geometricity(const ExteriorForm& omega,
                                         double tol = 1e-6);

struct HitchinResult {
  QInvariants qinv;
  ComplexStructureData j;
  ExteriorForm omega;      // real part equals the input exactly
  double type_residual = 0;  // mass of omega outside type (3,0)
};
// Recovers the compatible structure of a real 3-form with positive definite
// q: J = +-K / d^{1/6} with the sign fixed by compatibility, partner by the
// holomorphic type projection. Throws std::domain_error when q is not
// positive definite.
HitchinResult hitchin_partner(const ExteriorForm& alpha);

struct NormalFormU3 {
  Complex c1;
  Complex c2;
  Eigen::Vector3d lambda;  // ascending, in (0, 1]
  Eigen::MatrixXd g;       // symplectic; pullback(g, omega) = normal form
  double residual = 0;     // relative reconstruction mismatch
};
// Normal form on six dimensions: after the change of coordinates g,
//   omega = Re(c1 dz1^dz2^dz3)
//         + i Im(c2 (l1 dx1 + i dy1)^(l2 dx2 + i dy2)^(l3 dx3 + i dy3)).
// arg(c1) is normalized into [0, pi) by the joint sign flip
// (c1, c2) -> (-c1, -c2); a joint phase ambiguity remains.
NormalFormU3 normal_form_u3(const ExteriorForm& omega);

// Builds the right-hand side above from the parameters.
ExteriorForm normal_form_u3_form(Complex c1, Complex c2,
                                 const Eigen::Vector3d& lambda);

// Symplectic reduction along a coisotropic frame w (2n x (2n-j)): contracts
// with nu spanning the top exterior power of the symplectic complement
// w-perp, then expresses the restriction in a symplectic basis of w mod
// w-perp (built by greedy symplectic Gram-Schmidt over the columns of w, so
// the chart is deterministic in the column order). Output lives on
// R^{2(n-j)}. Throws std::domain_error when w is not coisotropic or nu does
// not span Det(w-perp).
ExteriorForm reduce(const ExteriorForm& omega, const Eigen::MatrixXd& w,
                    const Multivector& nu);

// Wedge of the pullbacks under the two projections of the direct sum;
// factor 1 occupies coordinates (x_1..x_{n1}, y_1..y_{n1}).
ExteriorForm product_form(const ExteriorForm& omega1,
                          const ExteriorForm& omega2);

// Coefficient of the volume form sign^{n(n-1)/2} (i/2)^n omega ^ conj(omega)
// against omega^n/n!; 1 for dz_1^..^dz_n. The imaginary residual (should be
// ~0) is written to imag_residual when given.
double vol_ratio(const ExteriorForm& omega, double* imag_residual = nullptr);

}  // namespace lagdom
