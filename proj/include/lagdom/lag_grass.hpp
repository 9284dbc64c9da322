#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "lagdom/exterior.hpp"

namespace lagdom {

// A Lagrangian frame is a 2n x n real matrix F of full rank whose columns
// span an omega-isotropic subspace: F^T Om F = 0.
struct LagrangianFrame {
  Eigen::MatrixXd f;
  int n() const { return int(f.cols()); }
};

double isotropy_residual(const Eigen::MatrixXd& frame);
bool is_lagrangian_frame(const Eigen::MatrixXd& frame, double tol = 1e-9);

// Wedge of the columns; coefficients are the n x n minors of the frame,
// ordered by ascending row mask.
Multivector decomposable_from_frame(const Eigen::MatrixXd& frame);

// evaluate(a, decomposable_from_frame(frame)) without building the wedge.
Complex eval_on_frame(const ExteriorForm& a, const Eigen::MatrixXd& frame);

// Haar sample: random unitary U = A + iB mapped to the orthonormal isotropic
// frame [A; B].
LagrangianFrame sample_lagrangian(int n, std::uint64_t seed);

// Winding number over theta in [0, 2pi] of theta |-> a(e^{i theta} w) where w
// is the frame plane rotated by e^{theta J0}. Phase-unwraps with adaptive
// bisection whenever a step exceeds pi/2 (max depth 20). Throws
// std::domain_error if the modulus collapses along the loop or the total
// increment is not close to a multiple of 2pi.
int loop_winding(const ExteriorForm& a, const Eigen::MatrixXd& frame,
                 int samples = 64);

struct MinAbsResult {
  double value = 0;        // min over the sampled descent runs
  Eigen::MatrixXd frame;   // orthonormal frame achieving it
  double grad_residual = 0;
  int best_restart = -1;
};

// min |a(w)| over unit decomposable Lagrangian w, by multi-start projected
// gradient descent in exp-charts of U(n)/O(n). Restart r uses seed XOR r, and
// results merge by min-reduction, so the outcome is deterministic for a fixed
// (seed, restarts) pair regardless of evaluation order.
MinAbsResult min_abs_on_lgr(const ExteriorForm& a, std::uint64_t seed,
                            int restarts = 64, int max_iter = 400);

}  // namespace lagdom
