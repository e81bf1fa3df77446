#pragma once

#include "hyrad/design_common.hpp"

namespace hyrad {

enum class FilterKind { Radar, Comm };

/// Block-coordinate state for the max-min design. The rank-one matrices
/// mirror the vectors after every completed step.
struct MmState {
  DesignPoint point;
  Mat S_r, W_r, W_c;
  int outer = 0;
  std::uint64_t round_counter = 0;  // randomization substream index
  std::vector<double> objective_trace;

  void refresh_matrices();
};

MmState mm_init(const DesignContext& ctx, const DesignPoint& init);

/// One semidefinite-relaxed filter update: builds the ratio family for the
/// chosen filter, runs the parametric max-min driver, rounds by
/// randomization (scored by the worst case of the full per-delay SINR) and
/// keeps the previous filter when it still scores best.
void mm_filter_step(MmState& state, FilterKind which, const DesignContext& ctx,
                    const DesignConfig& cfg);

/// Waveform update: sequential convex programming on the relaxed waveform
/// matrix followed by randomization to a full-power vector.
void mm_waveform_step(MmState& state, const DesignContext& ctx,
                      const DesignConfig& cfg);

/// Full sequential max-min design (filters then waveform per outer
/// iteration, until the worst-case SINR improvement drops below epsilon).
DesignReport mm_design(const Scenario& sc, const CommWaveformModel& model,
                       const DesignPoint& init, const DesignConfig& cfg);

}  // namespace hyrad
