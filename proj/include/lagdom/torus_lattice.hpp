#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "lagdom/exterior.hpp"

namespace lagdom {

// Torus R^{2n}/(Z^n + Z d_1 + ... + Z d_n) in the standard basis, with the
// symplectic form equal to omega_scale times the standard one. Divisors form
// a chain d_1 = 1 | d_2 | ... | d_n.
struct RationalTorus {
  int n = 1;
  std::vector<long long> divisors = {1};
  double omega_scale = 1.0;
};

RationalTorus standard_torus(int n);
void validate_torus(const RationalTorus& t);

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// A homology class of linear Lagrangian subtori: a saturated rank-n integer
// column lattice in canonical Hermite normal form, together with its exact
// integer Plucker coordinate vector (ascending row-mask order, gcd 1).
struct LatticeLagrangianClass {
  IntMatrix frame;                  // 2n x n, column HNF
  std::vector<long long> plucker;   // one entry per n-subset of rows
  double plucker_norm() const;
};

// Canonical column-style Hermite normal form of an integer matrix with
// linearly independent columns: pivots positive and topmost in their column,
// pivot rows strictly increasing, entries left of a pivot in its row reduced
// into [0, pivot). Unique per column lattice.
IntMatrix hnf_columns(const IntMatrix& a);

// Exact integer n x n minors by ascending row mask.
std::vector<long long> integer_plucker(const IntMatrix& frame);

// All classes whose canonical frame has entries bounded by height, subject to
// the torus constraints: columns pairwise omega-orthogonal (M^T N symmetric),
// row k of the lower block divisible by d_k, and primitive Plucker vector.
// Exact integer arithmetic; output sorted by frame entries.
std::vector<LatticeLagrangianClass> enumerate_lagrangian_classes(
    const RationalTorus& t, long long height);

// Z(gamma) = evaluate(Omega, gamma) on the integer Plucker vector. The class
// is primitive, so the representative subtorus has covolume 1 in its span.
Complex central_charge(const ExteriorForm& omega,
                       const LatticeLagrangianClass& cls);

struct SystoleResult {
  double sys = 0;
  LatticeLagrangianClass witness;
  bool certified = false;
  double radius = 0;      // Plucker-norm ball provably covered
  double lgr_min = 0;     // numeric minimum of |Omega| over LGr
  long long height = 0;   // entry bound actually enumerated
};

// Minimal |Z(gamma)| over lattice Lagrangian classes. Every n x n minor of an
// HNF frame is a Plucker coordinate, so entries are bounded by the Plucker
// norm; enumerating entries up to ceil(B) therefore covers the whole ball of
// radius B = best |Z| / m, where m is the LGr minimum. m itself comes from
// numeric minimization (exact for n = 1), so "certified" means numerically
// certified. If m is degenerate or the ball is too large to enumerate, falls
// back to an uncertified bounded scan.
SystoleResult systole(const ExteriorForm& omega, const RationalTorus& t,
                      std::uint64_t seed);

// Integral of the volume form of omega over the torus: vol_ratio times the
// integer covolume (product of divisors) times omega_scale^n, the Jacobian
// between the Darboux frame carrying the form and the lattice coordinates.
double torus_volume(const ExteriorForm& omega, const RationalTorus& t);

struct SystolicRow {
  std::string sample_id;
  int n = 0;
  double sys = 0;
  double vol = 0;
  double ratio = 0;  // sys^2 / vol
  bool certified = false;
  std::uint64_t seed = 0;
};

struct SystolicExperiment {
  std::vector<SystolicRow> rows;
  double max_ratio_geometric = 0;
  double max_ratio_ag = 0;
};

// Paired sampling on the standard torus: geometric forms from random Siegel
// points, then an almost geometric partner Omega + eps*conj(Omega) with
// |eps| < 1 for each. Ratios are scale-invariant; uncertified systoles are
// flagged per row.
SystolicExperiment systolic_experiment(int n, int samples, std::uint64_t seed);

// CSV with header sample_id,n,sys,vol,ratio,certified,seed and 12 significant
// digits on floats. Deterministic for a fixed experiment.
std::string systolic_csv(const SystolicExperiment& e);

}  // namespace lagdom
