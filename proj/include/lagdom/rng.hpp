#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace lagdom {

// Deterministic random source. All randomized entry points take an explicit
// 64-bit seed; derived streams use seed XOR a fixed odd multiplier of the
// stream index so parallel restarts stay reproducible regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // uniform in [0, 1)
  double uniform() {
    return (gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller without state so the draw count per call is fixed.
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  Eigen::MatrixXd gaussian_matrix(int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = gaussian();
    return m;
  }

  Eigen::MatrixXcd gaussian_complex_matrix(int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        double re = gaussian();
        double im = gaussian();
        m(i, j) = std::complex<double>(re, im);
      }
    return m;
  }

 private:
  std::mt19937_64 gen_;
};

inline std::uint64_t derived_seed(std::uint64_t master, std::uint64_t index) {
  return master ^ (0x9E3779B97F4A7C15ull * (index + 1));
}

}  // namespace lagdom
