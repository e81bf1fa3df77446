#include "hyrad/design_ws.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "hyrad/fractional.hpp"
#include "hyrad/rng.hpp"

namespace hyrad {

void WsState::refresh_matrices() {
  S_r = point.s_r * point.s_r.adjoint();
  W_r = point.w_r * point.w_r.adjoint();
  W_c = point.w_c * point.w_c.adjoint();
}

WsState ws_init(const DesignContext& ctx, const DesignPoint& init) {
  init.validate(ctx.sc.power_budget);
  WsState st;
  st.point = init;
  st.slack.assign(static_cast<std::size_t>(2 * ctx.sc.k_bound + 1), 0.0);
  st.refresh_matrices();
  return st;
}

void ws_filter_r_step(WsState& state, const DesignContext& ctx,
                      const DesignConfig& cfg) {
  const int K = ctx.sc.k_bound;
  const Vec& s_r = state.point.s_r;

  std::vector<Mat> penalties;
  std::vector<double> weights;
  penalties.reserve(static_cast<std::size_t>(2 * K + 1));
  weights.reserve(static_cast<std::size_t>(2 * K + 1));
  for (int k = -K; k <= K; ++k) {
    penalties.push_back(ctx.interf(k));
    weights.push_back(ctx.sc.weight(k) * ctx.sc.gamma_r);
  }

  // slack initialization at the fixed point of the closed-form update for
  // the incoming filter
  const FractionalResult fr = quadratic_transform_sum(
      state.S_r, penalties, weights, 1.0, cfg.epsilon, cfg.solver, &state.W_r);
  for (int k = -K; k <= K; ++k) {
    const std::size_t i = static_cast<std::size_t>(k + K);
    const double den = trace_inner(penalties[i], fr.W);
    const double num = weights[i] * trace_inner(state.S_r, fr.W);
    state.slack[i] = den > 0.0 ? std::sqrt(std::max(num, 0.0)) / den : 0.0;
  }

  const auto score = [&](const Vec& cand) {
    double acc = 0.0;
    for (int k = -K; k <= K; ++k) {
      acc += ctx.sc.weight(k) * detail::sinr_r_term(ctx, s_r, cand, k);
    }
    return acc;
  };

  const std::uint64_t seed = derive_seed(cfg.seed, ++state.round_counter);
  const Vec cand =
      randomize_rank_one(fr.W, cfg.randomization_trials, score, seed);
  if (score(cand) > score(state.point.w_r)) {
    state.point.w_r = cand / cand.norm();
  }
  state.refresh_matrices();
}

void ws_filter_c_step(WsState& state, const DesignContext& ctx) {
  const int K = ctx.sc.k_bound;
  const int n = ctx.sc.n;

  Mat numerator = Mat::Zero(n, n);
  for (int k = -K; k <= K; ++k) {
    numerator += ctx.sc.weight(k) * ctx.sigma(k);
  }
  numerator *= ctx.sc.gamma_c;

  const Mat denom =
      ctx.sc.gamma_r * state.S_r + Mat::Identity(n, n);  // positive definite
  const Eigen::LLT<Mat> llt(denom);
  const Mat l = llt.matrixL();

  // R = L^-1 M L^-H; its leading eigenvector q gives w_c = L^-H q
  const Mat tmp = l.triangularView<Eigen::Lower>().solve(numerator);
  const Mat r = hermitian_part(
      l.triangularView<Eigen::Lower>().solve(tmp.adjoint()).adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(r);
  const Vec q = es.eigenvectors().col(n - 1);
  Vec w = l.adjoint().triangularView<Eigen::Upper>().solve(q);
  state.point.w_c = w / w.norm();
  state.refresh_matrices();
}

void ws_waveform_step(WsState& state, const DesignContext& ctx,
                      const DesignConfig& cfg) {
  const Mat S = detail::waveform_scp(ctx, state.point, /*weighted=*/true, cfg);
  const std::uint64_t seed = derive_seed(cfg.seed, ++state.round_counter);
  state.point.s_r =
      detail::round_waveform(ctx, state.point, S, /*weighted=*/true, cfg, seed);
  state.refresh_matrices();
}

DesignReport ws_design(const Scenario& sc, const CommWaveformModel& model,
                       const DesignPoint& init, const DesignConfig& cfg) {
  const DesignContext ctx = DesignContext::make(sc, model);
  WsState st = ws_init(ctx, init);

  DesignReport report;
  double prev = -std::numeric_limits<double>::infinity();
  for (st.outer = 1; st.outer <= cfg.max_outer; ++st.outer) {
    ws_filter_r_step(st, ctx, cfg);
    ws_filter_c_step(st, ctx);
    ws_waveform_step(st, ctx, cfg);
    const double obj = detail::weighted_sum(ctx, st.point);
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
