#include "lagdom/moduli_flow.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lagdom/rng.hpp"
#include "lagdom/symplectic.hpp"

namespace lagdom {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void demand(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

}  // namespace

PlaneAction plane_rotation(double theta) {
  PlaneAction a;
  a.m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return a;
}

PlaneAction plane_diag(double x, double y) {
  PlaneAction a;
  a.m << x, 0, 0, y;
  return a;
}

ExteriorForm gl2_act(const PlaneAction& a, const ExteriorForm& omega) {
  require(a.m.determinant() > 0,
          "plane action must have positive determinant");
  ExteriorForm re = real_part(omega);
  ExteriorForm im = imag_part(omega);
  return Complex(a.m(0, 0), a.m(1, 0)) * re +
         Complex(a.m(0, 1), a.m(1, 1)) * im;
}

ExteriorForm normalize_unit_volume(const ExteriorForm& omega) {
  double v = vol_ratio(omega);
  demand(v > 0, "volume_ratio_not_positive");
  return Complex(1.0 / std::sqrt(v), 0.0) * omega;
}

double f_invariant(const ExteriorForm& omega) {
  require(omega.n == 3 && omega.degree == 3,
          "f-invariant is defined for 3-forms on R^6");
  QInvariants qi = q_invariants(real_part(omega));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(qi.q);
  double top = es.eigenvalues().cwiseAbs().maxCoeff();
  demand(es.eigenvalues().minCoeff() > 1e-12 * top,
         "q_not_positive_definite");
  return std::log(std::abs(qi.d));
}

double shift_constant() { return 12.0 * std::log(2.0); }

double shift_check(const ExteriorForm& omega) {
  return f_invariant(gl2_act(plane_diag(2.0, 0.5), omega)) -
         f_invariant(omega);
}

const char* to_string(SampleStrategy s) {
  switch (s) {
    case SampleStrategy::geometric: return "geometric";
    case SampleStrategy::ag: return "ag";
    case SampleStrategy::perturbed: return "perturbed";
  }
  return "?";
}

namespace {

Eigen::MatrixXd random_spd(int n, Rng& rng, double spread) {
  Eigen::MatrixXd s0 = rng.gaussian_matrix(n, n);
  Eigen::MatrixXd s = spread * 0.5 * (s0 + s0.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  return es.eigenvectors() *
         es.eigenvalues().array().exp().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

ExteriorForm random_primitive_3form(Rng& rng) {
  ExteriorForm raw(3, 3);
  for (Mask m : masks_of_degree(6, 3))
    raw.set(m, Complex(rng.gaussian(), rng.gaussian()));
  return primitive_decompose(raw)[0];
}

}  // namespace

SampleBatch sample_members(int n, int count, std::uint64_t seed,
                           SampleStrategy strategy) {
  require(n == 3, "sampling targets the n = 3 slice");
  require(count >= 1, "need at least one sample");
  SampleBatch batch;
  char buf[24];
  const int budget_per_sample = 50;
  for (int s = 0; s < count; ++s) {
    std::uint64_t sample_seed =
        derived_seed(seed, static_cast<std::uint64_t>(s));
    Rng rng(sample_seed);
    bool done = false;
    for (int attempt = 0; attempt < budget_per_sample && !done; ++attempt) {
      ++batch.attempts;
      SiegelPoint z;
      Eigen::MatrixXd x0 = rng.gaussian_matrix(n, n);
      z.x = 0.3 * (x0 + x0.transpose());
      z.y = random_spd(n, rng, 0.35);
      ExteriorForm cand =
          std::polar(1.0, 2.0 * M_PI * rng.uniform()) * siegel_form(z);
      if (strategy != SampleStrategy::geometric) {
        Complex eps =
            std::polar(0.15 + 0.7 * rng.uniform(), 2.0 * M_PI * rng.uniform());
        cand = cand + eps * conj_form(cand);
      }
      if (strategy == SampleStrategy::perturbed) {
        ExteriorForm p = random_primitive_3form(rng);
        cand = cand +
               Complex(0.05 * coeff_norm(cand) / coeff_norm(p), 0.0) * p;
      }
      if (strategy != SampleStrategy::geometric &&
          is_member(cand, 1e-6, false).verdict != Verdict::member)
        continue;

      FlowSample out;
      std::snprintf(buf, sizeof buf, "s%03d", s);
      out.sample_id = buf;
      out.strategy = strategy;
      out.omega = normalize_unit_volume(cand);
      out.f = f_invariant(out.omega);
      out.delta_f_after_t = shift_check(out.omega);
      out.geometricity = classify_geometricity(out.omega).kind;
      out.normalized = true;
      out.accepted = true;
      out.seed = sample_seed;
      batch.samples.push_back(std::move(out));
      done = true;
    }
    if (!done) {
      char msg[96];
      std::snprintf(msg, sizeof msg,
                    "sampling_rejection_budget_exhausted acceptance_rate=%.3g",
                    static_cast<double>(batch.samples.size()) /
                        batch.attempts);
      throw std::domain_error(msg);
    }
  }
  batch.acceptance_rate =
      static_cast<double>(batch.samples.size()) / batch.attempts;
  return batch;
}

std::string flow_csv(const SampleBatch& b) {
  std::string out =
      "sample_id,strategy,f,delta_f_after_T,geometricity,accepted,seed\n";
  char buf[176];
  for (const FlowSample& s : b.samples) {
    std::snprintf(buf, sizeof buf, "%s,%s,%.12g,%.12g,%s,%s,%llu\n",
                  s.sample_id.c_str(), to_string(s.strategy), s.f,
                  s.delta_f_after_t, to_string(s.geometricity),
                  s.accepted ? "true" : "false",
                  static_cast<unsigned long long>(s.seed));
    out += buf;
  }
  return out;
}

}  // namespace lagdom
