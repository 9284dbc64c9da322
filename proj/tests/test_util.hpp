#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include "lagdom/rng.hpp"
#include "lagdom/symplectic.hpp"

namespace testutil {

// exp of a hamiltonian matrix Om^-1 S, S symmetric, is symplectic.
inline Eigen::MatrixXd random_symplectic(int n, lagdom::Rng& rng,
                                         double spread = 0.4) {
  Eigen::MatrixXd s0 = rng.gaussian_matrix(2 * n, 2 * n);
  Eigen::MatrixXd s = spread * 0.5 * (s0 + s0.transpose());
  Eigen::MatrixXd x = -lagdom::omega_gram(n) * s;
  return x.exp();
}

}  // namespace testutil
