#include "hyrad/design_sync.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "hyrad/design_mm.hpp"
#include "hyrad/design_ws.hpp"

namespace hyrad {

Vec sync_filter_r_with(const Vec& s_r, const Scenario& sc,
                       const Mat& interference) {
  if (!(s_r.squaredNorm() > 0.0)) {
    throw std::invalid_argument("sync_filter_r: waveform must be nonzero");
  }
  (void)sc;
  const Eigen::LLT<Mat> llt(interference);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("sync_filter_r: interference matrix not PD");
  }
  const Vec solved = llt.solve(s_r);
  const double denom = std::real(s_r.dot(solved));  // s^H (.)^{-1} s > 0
  return solved / denom;
}

Vec sync_filter_r(const Vec& s_r, const Scenario& sc,
                  const CommWaveformModel& model) {
  const Mat interference =
      sc.gamma_c * comm_covariance(model, 0, sc.n) + Mat::Identity(sc.n, sc.n);
  return sync_filter_r_with(s_r, sc, interference);
}

DesignReport sync_design(const Scenario& sc, const CommWaveformModel& model,
                         const DesignPoint& init, const DesignConfig& cfg) {
  if (sc.k_bound != 0) {
    throw std::invalid_argument("sync_design: requires K = 0");
  }
  const DesignContext ctx = DesignContext::make(sc, model);
  WsState st = ws_init(ctx, init);  // reuse the state/waveform machinery

  DesignReport report;
  double prev = -std::numeric_limits<double>::infinity();
  for (st.outer = 1; st.outer <= cfg.max_outer; ++st.outer) {
    st.point.w_r = sync_filter_r_with(st.point.s_r, sc, ctx.interf(0));
    st.point.w_r /= st.point.w_r.norm();
    st.refresh_matrices();
    ws_filter_c_step(st, ctx);  // K = 0 Rayleigh step
    ws_waveform_step(st, ctx, cfg);
    const double obj = sinr_k_with(sc, st.point, ctx.sigma(0));
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

double baseline_sinr(BaselineKind kind, const Scenario& sc,
                     const CommWaveformModel& model,
                     const std::optional<Vec>& s_r) {
  sc.validate_with(model);
  if (kind == BaselineKind::ActiveOnly) {
    const double power = s_r.has_value() ? s_r->squaredNorm() : sc.power_budget;
    if (!(power > 0.0)) {
      throw std::invalid_argument("baseline_sinr: active-only needs power");
    }
    return sc.gamma_r * power;
  }
  const auto [lmax, q] =
      detail::leading_eigenpair(comm_covariance(model, 0, sc.n));
  (void)q;
  return sc.gamma_c * std::max(lmax, 0.0);
}

DesignReport hybrid_rx_design(const Scenario& sc,
                              const CommWaveformModel& model, const Vec& s_r,
                              const DesignConfig& cfg, DesignMode mode) {
  const DesignContext ctx = DesignContext::make(sc, model);
  if (s_r.squaredNorm() > sc.power_budget * (1.0 + 1e-9)) {
    throw std::invalid_argument("hybrid_rx_design: waveform exceeds budget");
  }

  DesignPoint init = make_initial_point(sc, model, cfg.seed);
  init.s_r = s_r;
  init.w_r = s_r / s_r.norm();

  DesignReport report;
  if (mode == DesignMode::MaxMin) {
    MmState st = mm_init(ctx, init);
    double prev = -std::numeric_limits<double>::infinity();
    for (st.outer = 1; st.outer <= cfg.max_outer; ++st.outer) {
      mm_filter_step(st, FilterKind::Radar, ctx, cfg);
      mm_filter_step(st, FilterKind::Comm, ctx, cfg);
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
    report.sinr_profile = detail::sinr_profile(ctx, st.point);
  } else {
    WsState st = ws_init(ctx, init);
    double prev = -std::numeric_limits<double>::infinity();
    for (st.outer = 1; st.outer <= cfg.max_outer; ++st.outer) {
      ws_filter_r_step(st, ctx, cfg);
      ws_filter_c_step(st, ctx);
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
    report.sinr_profile = detail::sinr_profile(ctx, st.point);
  }
  report.objective = report.objective_trace.back();
  report.outer_iterations = static_cast<int>(report.objective_trace.size());
  return report;
}

}  // namespace hyrad
