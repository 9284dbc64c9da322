#pragma once

#include <Eigen/Dense>

#include "lagdom/exterior.hpp"

namespace lagdom {

// Gram matrix of omega in the e-basis: [[0, I], [-I, 0]].
Eigen::MatrixXd omega_gram(int n);

// Standard compatible complex structure J0 = [[0, -I], [I, 0]]
// (dx_i |-> dy_i), so omega(v, J0 v) = |v|^2.
Eigen::MatrixXd standard_J(int n);

double symplectic_residual(const Eigen::MatrixXd& g);
bool is_symplectic(const Eigen::MatrixXd& g, double tol = 1e-10);

// Pullback (g^* a)(v_1..v_k) = a(g v_1, .., g v_k) for any linear g;
// coefficients transform by k x k minors of g.
ExteriorForm pullback(const Eigen::MatrixXd& g, const ExteriorForm& a);

// Right group action a . g = g^* a; requires g symplectic.
ExteriorForm group_act(const Eigen::MatrixXd& g, const ExteriorForm& a);

// Derivative of pullback at the identity: d/dt (I + tX)^* a at t = 0.
ExteriorForm pullback_derivative(const Eigen::MatrixXd& x,
                                 const ExteriorForm& a);

struct PolarCartan {
  Eigen::MatrixXd u;  // orthogonal and symplectic factor
  Eigen::MatrixXd x;  // symmetric, in sp(2n); g = u * exp(x)
};
PolarCartan polar_cartan_decompose(const Eigen::MatrixXd& g);

// Diagnostics for a candidate complex structure.
struct ComplexStructureData {
  Eigen::MatrixXd j;
  double square_residual = 0;  // ||J^2 + I||_F
  double omega_residual = 0;   // ||J^T Om J - Om||_F
  bool compatible = false;     // omega(., J.) symmetric positive definite
};
ComplexStructureData analyze_structure(const Eigen::MatrixXd& j);

// Splits a k-form into components of type (p, k-p) w.r.t. J by sampling the
// rotations R_t = cos(t) I + sin(t) J at k+1 angles and inverting the DFT.
// out[p] has type (p, k-p).
std::vector<ExteriorForm> type_decompose(const ExteriorForm& a,
                                         const Eigen::MatrixXd& j);

struct SiegelPoint {
  Eigen::MatrixXd x;  // symmetric
  Eigen::MatrixXd y;  // symmetric positive definite
};

// J' = [[-X Y^-1, -Y - X Y^-1 X], [Y^-1, Y^-1 X]].
ComplexStructureData siegel_complex_structure(const SiegelPoint& z);

// The holomorphic volume form of the point Z = X + iY expressed on the
// standard integer frame: pullback of dz_1^..^dz_n under [[I, X], [0, Y]].
// Primitive, and evaluates to det(M + ZN) on an integer frame [M; N].
ExteriorForm siegel_form(const SiegelPoint& z);

// Hermitian pairing on middle-degree forms:
//   <a, b> = (-1)^{n(n+1)/2} i^n top_coefficient(conj(a) ^ b).
// The normalizing factor (+1 for even n, -i for odd n) makes the pairing
// conjugate-symmetric (real on the diagonal) in every dimension, with
// <dz_1^..^dz_n, same> = 2^n.
Complex hermitian_pairing(const ExteriorForm& a, const ExteriorForm& b);

}  // namespace lagdom
