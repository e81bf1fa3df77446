#pragma once

#include "hyrad/design_common.hpp"

namespace hyrad {

/// State for the weighted-sum design; carries the quadratic-transform slack
/// variables of the radar-filter subproblem alongside the iterates.
struct WsState {
  DesignPoint point;
  Mat S_r, W_r, W_c;
  std::vector<double> slack;  // lambda_k, length 2K+1
  int outer = 0;
  std::uint64_t round_counter = 0;
  std::vector<double> objective_trace;

  void refresh_matrices();
};

WsState ws_init(const DesignContext& ctx, const DesignPoint& init);

/// Radar-filter update via the quadratic-transform sum-of-ratios driver and
/// randomization rounding scored by the weighted radar SINR sum.
void ws_filter_r_step(WsState& state, const DesignContext& ctx,
                      const DesignConfig& cfg);

/// Comm-filter update in closed form: the weighted sum of passive-path
/// SINRs is a generalized Rayleigh quotient (the per-delay denominators
/// coincide), solved by a Cholesky whitening plus a leading eigenvector.
void ws_filter_c_step(WsState& state, const DesignContext& ctx);

/// Waveform update: each SCP subproblem is affine in the waveform matrix,
/// so the inner solve is a single leading-eigenvector step.
void ws_waveform_step(WsState& state, const DesignContext& ctx,
                      const DesignConfig& cfg);

/// Full sequential weighted-sum design.
DesignReport ws_design(const Scenario& sc, const CommWaveformModel& model,
                       const DesignPoint& init, const DesignConfig& cfg);

}  // namespace hyrad
