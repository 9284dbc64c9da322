#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "lagdom/exterior.hpp"
#include "lagdom/u_space.hpp"

namespace lagdom {

// Linear action on the value plane C = R^2: the real and imaginary parts of
// the form are recombined by the matrix. Must have positive determinant.
struct PlaneAction {
  Eigen::Matrix2d m;
};

PlaneAction plane_rotation(double theta);
PlaneAction plane_diag(double a, double d);

// (A . Omega)(w) = A . (Omega(w)). Commutes with symplectic pullback. For odd
// n, Omega ^ conj(Omega) = -2i Re ^ Im picks up det(A), so unit-determinant
// actions preserve vol_ratio.
ExteriorForm gl2_act(const PlaneAction& a, const ExteriorForm& omega);

// Scales by vol_ratio^{-1/2} onto the unit-volume slice; membership and
// component sign are unchanged. Requires vol_ratio > 0.
ExteriorForm normalize_unit_volume(const ExteriorForm& omega);

// f = log |det K| for the invariant pairing K of the real part; n = 3 only.
// Requires q of the real part positive definite. Invariant under Sp and
// shifted by exactly 12 log 2 by the doubling action diag(2, 1/2).
double f_invariant(const ExteriorForm& omega);

// Measured f(T.Omega) - f(Omega) for T = diag(2, 1/2). The action scales the
// real part by exactly 2, so the true value is 12 log 2.
double shift_check(const ExteriorForm& omega);

double shift_constant();  // 12 log 2

enum class SampleStrategy { geometric, ag, perturbed };
const char* to_string(SampleStrategy s);

struct FlowSample {
  std::string sample_id;
  SampleStrategy strategy = SampleStrategy::geometric;
  ExteriorForm omega;  // normalized to the unit-volume slice
  double f = 0;
  double delta_f_after_t = 0;
  Geometricity geometricity = Geometricity::unknown;
  bool normalized = false;
  bool accepted = false;
  std::uint64_t seed = 0;
};

struct SampleBatch {
  std::vector<FlowSample> samples;
  int attempts = 0;
  double acceptance_rate = 0;
};

// Random members of the unit-volume slice, n = 3 only. "geometric" draws a
// Siegel point and a phase; "ag" adds eps * conj with |eps| < 1; "perturbed"
// further adds a small random primitive form and rejection-filters by
// membership. Deterministic per seed. Sampling is explicitly non-uniform:
// no claim is made about the invariant measure.
SampleBatch sample_members(int n, int count, std::uint64_t seed,
                           SampleStrategy strategy);

// CSV with header sample_id,strategy,f,delta_f_after_T,geometricity,
// accepted,seed and 12 significant digits on floats.
std::string flow_csv(const SampleBatch& b);

}  // namespace lagdom
