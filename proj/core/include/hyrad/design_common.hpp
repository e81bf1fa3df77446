#pragma once

#include <cstdint>
#include <vector>

#include "hyrad/sdp_kernel.hpp"
#include "hyrad/signal_model.hpp"

namespace hyrad {

struct DesignConfig {
  double epsilon = 0.01;          // convergence tolerance (linear SINR units)
  int randomization_trials = 200; // Q
  int max_outer = 50;
  int max_scp = 50;
  std::uint64_t seed = 42;
  SolverConfig solver;
};

/// Result of a full design run: the converged point, the per-outer-iteration
/// objective trace (in the design's own metric) and the final per-delay SINR
/// profile for k in [-K, K].
struct DesignReport {
  DesignPoint point;
  std::vector<double> objective_trace;
  std::vector<double> sinr_profile;
  double objective = 0.0;
  int outer_iterations = 0;
  bool converged = false;
};

/// Per-run cache: scenario, the delay covariances and the radar-filter
/// interference-plus-noise matrices gamma_c Sigma_k + I.
struct DesignContext {
  Scenario sc;
  DelayCovariances cov;
  std::vector<Mat> interference;  // gamma_c Sigma_k + I, index k + K

  static DesignContext make(const Scenario& sc, const CommWaveformModel& model);
  const Mat& sigma(int k) const { return cov.at(k); }
  const Mat& interf(int k) const {
    return interference[static_cast<std::size_t>(k + sc.k_bound)];
  }
};

/// Default initialization: random binary waveform at full power, comm filter
/// along the leading eigenvector of Sigma_0, radar filter matched to the
/// waveform (only consumed by drivers that need a nonempty starting filter).
DesignPoint make_initial_point(const Scenario& sc,
                               const CommWaveformModel& model,
                               std::uint64_t seed);

namespace detail {

/// Outer-loop convergence test. The tolerance is applied to the objective
/// improvement on the dB scale: a linear-scale threshold would make the
/// stopping rule depend on the objective magnitude (which varies by orders
/// of magnitude across channel SNRs), while the per-iteration SINR gain in
/// dB is the quantity that actually flattens out after a few iterations.
bool improvement_below(double previous, double current, double eps);

double sinr_r_term(const DesignContext& ctx, const Vec& s_r, const Vec& w_r,
                   int k);
double sinr_c_term(const DesignContext& ctx, const Vec& s_r, const Vec& w_c,
                   int k);
double worst_case(const DesignContext& ctx, const DesignPoint& dp);
double weighted_sum(const DesignContext& ctx, const DesignPoint& dp);
std::vector<double> sinr_profile(const DesignContext& ctx,
                                 const DesignPoint& dp);

/// One sequential-convex-programming pass for the waveform: builds the
/// affine surrogate (exact radar term, linearized passive term) at the
/// current iterate and re-solves until the true relaxed objective stalls.
/// weighted = false optimizes the worst case over k, true the weighted sum.
/// Throws on a surrogate step that decreases the true objective by more than
/// round-off allows.
Mat waveform_scp(const DesignContext& ctx, const DesignPoint& dp,
                 bool weighted, const DesignConfig& cfg);

/// Randomization rounding for the waveform matrix: candidates are rescaled
/// to the full power budget, scored by the design objective, and the
/// previous waveform is kept when it still scores best.
Vec round_waveform(const DesignContext& ctx, const DesignPoint& dp,
                   const Mat& S_relaxed, bool weighted,
                   const DesignConfig& cfg, std::uint64_t seed);

}  // namespace detail

}  // namespace hyrad
