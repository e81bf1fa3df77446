#pragma once

#include <optional>

#include "hyrad/design_common.hpp"

namespace hyrad {

/// Closed-form radar filter for the no-uncertainty case:
/// w_r = (gamma_c Sigma_0 + I)^{-1} s_r, scaled by the (real, positive)
/// quadratic form so the expression matches the analytic solution exactly.
Vec sync_filter_r(const Vec& s_r, const Scenario& sc,
                  const CommWaveformModel& model);
Vec sync_filter_r_with(const Vec& s_r, const Scenario& sc,
                       const Mat& interference);

/// Simplified joint design for K = 0: closed-form filters, SCP waveform.
DesignReport sync_design(const Scenario& sc, const CommWaveformModel& model,
                         const DesignPoint& init, const DesignConfig& cfg);

enum class BaselineKind { ActiveOnly, PassiveOnly };

/// Interference-free single-path reference SINRs: active-only is the
/// matched-filter value gamma_r * |s_r|^2 (gamma_r * P_r when no waveform is
/// given), passive-only is gamma_c * lambda_max(Sigma_0).
double baseline_sinr(BaselineKind kind, const Scenario& sc,
                     const CommWaveformModel& model,
                     const std::optional<Vec>& s_r = std::nullopt);

enum class DesignMode { MaxMin, WeightedSum };

/// Receiver-only design: optimizes both filters with the given fixed
/// waveform, using the machinery of the selected mode. The reported
/// objective is the worst case for MaxMin and the weighted sum otherwise.
DesignReport hybrid_rx_design(const Scenario& sc,
                              const CommWaveformModel& model, const Vec& s_r,
                              const DesignConfig& cfg, DesignMode mode);

}  // namespace hyrad
