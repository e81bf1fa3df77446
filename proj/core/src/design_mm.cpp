#include "hyrad/design_mm.hpp"

#include <cmath>
#include <limits>

#include "hyrad/fractional.hpp"
#include "hyrad/rng.hpp"

namespace hyrad {

void MmState::refresh_matrices() {
  S_r = point.s_r * point.s_r.adjoint();
  W_r = point.w_r * point.w_r.adjoint();
  W_c = point.w_c * point.w_c.adjoint();
}

MmState mm_init(const DesignContext& ctx, const DesignPoint& init) {
  init.validate(ctx.sc.power_budget);
  MmState st;
  st.point = init;
  st.refresh_matrices();
  return st;
}

void mm_filter_step(MmState& state, FilterKind which, const DesignContext& ctx,
                    const DesignConfig& cfg) {
  const int K = ctx.sc.k_bound;
  const int m = 2 * K + 1;
  const Vec& s_r = state.point.s_r;

  RatioFamily fam;
  fam.numerators.reserve(m);
  fam.denominators.reserve(m);
  fam.offsets.reserve(m);

  Mat warm;
  if (which == FilterKind::Radar) {
    const Mat num_coeff = ctx.sc.gamma_r * state.S_r;
    for (int k = -K; k <= K; ++k) {
      fam.numerators.emplace_back(0.0, num_coeff);
      fam.denominators.emplace_back(0.0, ctx.interf(k));
      fam.offsets.push_back(
          detail::sinr_c_term(ctx, s_r, state.point.w_c, k));
    }
    warm = state.W_r;
  } else {
    const Mat den_coeff =
        ctx.sc.gamma_r * state.S_r + Mat::Identity(ctx.sc.n, ctx.sc.n);
    for (int k = -K; k <= K; ++k) {
      fam.numerators.emplace_back(0.0, ctx.sc.gamma_c * ctx.sigma(k));
      fam.denominators.emplace_back(0.0, den_coeff);
      fam.offsets.push_back(
          detail::sinr_r_term(ctx, s_r, state.point.w_r, k));
    }
    warm = state.W_c;
  }

  const FractionalResult fr =
      dinkelbach_maxmin(fam, 1.0, cfg.epsilon, cfg.solver, &warm);

  const auto score = [&](const Vec& cand) {
    double worst = std::numeric_limits<double>::infinity();
    for (int k = -K; k <= K; ++k) {
      const std::size_t i = static_cast<std::size_t>(k + K);
      const double own = which == FilterKind::Radar
                             ? detail::sinr_r_term(ctx, s_r, cand, k)
                             : detail::sinr_c_term(ctx, s_r, cand, k);
      worst = std::min(worst, own + fam.offsets[i]);
    }
    return worst;
  };

  const std::uint64_t seed = derive_seed(cfg.seed, ++state.round_counter);
  Vec cand = randomize_rank_one(fr.W, cfg.randomization_trials, score, seed);
  Vec& filter = which == FilterKind::Radar ? state.point.w_r : state.point.w_c;
  if (score(cand) > score(filter)) {
    filter = cand / cand.norm();
  }
  state.refresh_matrices();
}

void mm_waveform_step(MmState& state, const DesignContext& ctx,
                      const DesignConfig& cfg) {
  const Mat S = detail::waveform_scp(ctx, state.point, /*weighted=*/false, cfg);
  const std::uint64_t seed = derive_seed(cfg.seed, ++state.round_counter);
  state.point.s_r =
      detail::round_waveform(ctx, state.point, S, /*weighted=*/false, cfg, seed);
  state.refresh_matrices();
}

DesignReport mm_design(const Scenario& sc, const CommWaveformModel& model,
                       const DesignPoint& init, const DesignConfig& cfg) {
  const DesignContext ctx = DesignContext::make(sc, model);
  MmState st = mm_init(ctx, init);

  DesignReport report;
  double prev = -std::numeric_limits<double>::infinity();
  for (st.outer = 1; st.outer <= cfg.max_outer; ++st.outer) {
    mm_filter_step(st, FilterKind::Radar, ctx, cfg);
    mm_filter_step(st, FilterKind::Comm, ctx, cfg);
    mm_waveform_step(st, ctx, cfg);
    const double obj = detail::worst_case(ctx, st.point);
    st.objective_trace.push_back(obj);
    if (st.outer >= 2 && detail::improvement_below(prev, obj, cfg.epsilon)) {
      report.converged = true;
      break;
    }
    prev = obj;
  }
  report.point = st.point;
  report.objective_trace = st.objective_trace;
  report.objective = st.objective_trace.back();
  report.outer_iterations = static_cast<int>(st.objective_trace.size());
  report.sinr_profile = detail::sinr_profile(ctx, st.point);
  return report;
}

}  // namespace hyrad
