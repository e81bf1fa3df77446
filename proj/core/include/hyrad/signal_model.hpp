#pragma once

#include <vector>

#include "hyrad/types.hpp"

namespace hyrad {

/// Raised-cosine symbol pulse sampled at the receiver rate, truncated to
/// span_symbols symbol intervals with the peak at the window midpoint.
/// taps[i*P + p] = g((i*P + p - I*P/2) / P) for p in [0,P), i in [0,I).
struct PulseShape {
  double rolloff = 0.0;
  int samples_per_symbol = 1;  // P
  int span_symbols = 1;        // I
  RealVec taps;                // length I*P
};

/// Samples the raised-cosine pulse. The removable singularity at
/// |t| = T_c/(2*rolloff) is evaluated by its analytic limit.
/// Throws std::domain_error for rolloff outside [0,1].
PulseShape raised_cosine_taps(double rolloff, int samples_per_symbol,
                              int span_symbols);

/// Discrete linear-modulation model: the sample vector of a burst of L
/// symbols is s = H b, with H banded (column j holds the pulse taps starting
/// at row j*P).
struct CommWaveformModel {
  Mat H;  // M x L
  int L = 0;
  int P = 0;
  int I = 0;
  int M = 0;  // (L + I - 1) * P
};

CommWaveformModel build_waveform_matrix(const PulseShape& shape,
                                        int symbol_count);

/// Start of the length-n observation window within the length-m burst for
/// delay offset k: bar_k = (m - n)/2 - k. Requires (m - n) even; throws
/// std::out_of_range when the window leaves [0, m).
int shift_window_start(int k, int n, int m);

/// N x M selection matrix J_k: row i has a single 1 at column bar_k + i.
RealMat build_shift_matrix(int k, int n, int m);

/// Windowed Gram matrix Sigma_k = J_k H H^H J_k^H (unit symbol covariance).
Mat comm_covariance(const CommWaveformModel& model, int k, int n);

/// Channel and design parameters. gamma_r / gamma_c are linear-scale channel
/// SNRs; noise enters the SINR expressions only through them (sigma2 is used
/// explicitly by the detection harness).
struct Scenario {
  double gamma_r = 0.0;
  double gamma_c = 0.0;
  double sigma2 = 1.0;
  int n = 16;                // samples per radar pulse
  int k_bound = 0;           // K, timing uncertainty bound
  RealVec weights;           // u_k, length 2K+1; empty means all-ones
  double power_budget = 1.0; // P_r

  /// Weight for delay k in [-K, K]; all-ones when weights is empty.
  double weight(int k) const;
  void validate() const;
  /// Checks the window constraints against a model: (M-N) even and
  /// K <= (M-N)/2.
  void validate_with(const CommWaveformModel& model) const;
};

/// Decision variables: radar waveform and the two receive filters.
struct DesignPoint {
  Vec s_r;
  Vec w_r;
  Vec w_c;

  void validate(double power_budget) const;
};

/// Precomputed Sigma_k for k in [-bound, bound].
class DelayCovariances {
 public:
  DelayCovariances() = default;
  DelayCovariances(const CommWaveformModel& model, int n, int bound);
  const Mat& at(int k) const { return sigma_.at(static_cast<std::size_t>(k + bound_)); }
  int bound() const { return bound_; }

 private:
  std::vector<Mat> sigma_;
  int bound_ = -1;
};

/// Output SINR at delay offset k: radar-path term plus passive-path term.
double sinr_k(const Scenario& sc, const DesignPoint& dp,
              const CommWaveformModel& model, int k);
/// Same with a caller-supplied covariance for the delay.
double sinr_k_with(const Scenario& sc, const DesignPoint& dp,
                   const Mat& sigma);

/// min over k in [-K, K] of sinr_k.
double worst_case_sinr(const Scenario& sc, const DesignPoint& dp,
                       const CommWaveformModel& model);
double worst_case_sinr(const Scenario& sc, const DesignPoint& dp,
                       const DelayCovariances& cov);

/// sum_k u_k sinr_k (no 1/(2K+1) factor).
double weighted_sum_sinr(const Scenario& sc, const DesignPoint& dp,
                         const CommWaveformModel& model);
double weighted_sum_sinr(const Scenario& sc, const DesignPoint& dp,
                         const DelayCovariances& cov);

/// Integer delay offset induced by a target location error delta, in units
/// of t_s. Distances are measured in the same units as t_s (propagation
/// speed 1). Positive values mean the perturbed target sits closer to the
/// IO relative to the radar than the nominal one. Demo helper; the design
/// code parameterizes the offset directly.
int geometric_delay_offset(const Eigen::Vector2d& target,
                           const Eigen::Vector2d& radar,
                           const Eigen::Vector2d& io,
                           const Eigen::Vector2d& delta, double t_s);

}  // namespace hyrad
