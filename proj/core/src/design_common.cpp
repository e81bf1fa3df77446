#include "hyrad/design_common.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hyrad/rng.hpp"

namespace hyrad {

DesignContext DesignContext::make(const Scenario& sc,
                                  const CommWaveformModel& model) {
  sc.validate_with(model);
  DesignContext ctx{sc, DelayCovariances(model, sc.n, sc.k_bound), {}};
  const Mat eye = Mat::Identity(sc.n, sc.n);
  ctx.interference.reserve(static_cast<std::size_t>(2 * sc.k_bound + 1));
  for (int k = -sc.k_bound; k <= sc.k_bound; ++k) {
    ctx.interference.push_back(sc.gamma_c * ctx.cov.at(k) + eye);
  }
  return ctx;
}

DesignPoint make_initial_point(const Scenario& sc,
                               const CommWaveformModel& model,
                               std::uint64_t seed) {
  sc.validate_with(model);
  Rng rng(derive_seed(seed, 0x1717));
  const double amp = std::sqrt(sc.power_budget / sc.n);
  DesignPoint dp;
  dp.s_r = (amp * rng.rademacher(sc.n)).cast<cdouble>();
  const auto [lmax, q] =
      detail::leading_eigenpair(comm_covariance(model, 0, sc.n));
  (void)lmax;
  dp.w_c = q;
  dp.w_r = dp.s_r / dp.s_r.norm();
  return dp;
}

namespace detail {

bool improvement_below(double previous, double current, double eps) {
  if (previous <= 0.0 || current <= 0.0) {
    return std::abs(current - previous) < eps;
  }
  return std::abs(10.0 * std::log10(current / previous)) < eps;
}

double sinr_r_term(const DesignContext& ctx, const Vec& s_r, const Vec& w_r,
                   int k) {
  const double num = ctx.sc.gamma_r * std::norm(w_r.dot(s_r));
  const double den =
      ctx.sc.gamma_c * quad_form(w_r, ctx.sigma(k)) + w_r.squaredNorm();
  return num / den;
}

double sinr_c_term(const DesignContext& ctx, const Vec& s_r, const Vec& w_c,
                   int k) {
  const double num = ctx.sc.gamma_c * quad_form(w_c, ctx.sigma(k));
  const double den =
      ctx.sc.gamma_r * std::norm(w_c.dot(s_r)) + w_c.squaredNorm();
  return num / den;
}

double worst_case(const DesignContext& ctx, const DesignPoint& dp) {
  return worst_case_sinr(ctx.sc, dp, ctx.cov);
}

double weighted_sum(const DesignContext& ctx, const DesignPoint& dp) {
  return weighted_sum_sinr(ctx.sc, dp, ctx.cov);
}

std::vector<double> sinr_profile(const DesignContext& ctx,
                                 const DesignPoint& dp) {
  std::vector<double> profile;
  profile.reserve(static_cast<std::size_t>(2 * ctx.sc.k_bound + 1));
  for (int k = -ctx.sc.k_bound; k <= ctx.sc.k_bound; ++k) {
    profile.push_back(sinr_k_with(ctx.sc, dp, ctx.sigma(k)));
  }
  return profile;
}

namespace {

// Exact relaxed objective at a waveform matrix S (filters fixed):
// min_k or sum_k u_k of  gamma_r tr(W_r S)/den_r_k + num_c_k/(gamma_r tr(W_c S) + |w_c|^2).
struct WaveformObjective {
  const DesignContext& ctx;
  const DesignPoint& dp;
  bool weighted;
  std::vector<double> den_r;  // tr(W_r (gamma_c Sigma_k + I)), per k
  std::vector<double> num_c;  // gamma_c w_c^H Sigma_k w_c, per k
  double wc_norm2;

  WaveformObjective(const DesignContext& c, const DesignPoint& d, bool wsum)
      : ctx(c), dp(d), weighted(wsum), wc_norm2(d.w_c.squaredNorm()) {
    const int K = ctx.sc.k_bound;
    den_r.reserve(static_cast<std::size_t>(2 * K + 1));
    num_c.reserve(static_cast<std::size_t>(2 * K + 1));
    for (int k = -K; k <= K; ++k) {
      den_r.push_back(quad_form(dp.w_r, ctx.interf(k)));
      num_c.push_back(ctx.sc.gamma_c * quad_form(dp.w_c, ctx.sigma(k)));
    }
  }

  double radar_gain(const Mat& S) const {
    return std::real(dp.w_r.dot(S * dp.w_r));  // tr(W_r S)
  }
  double comm_leak(const Mat& S) const {
    return std::real(dp.w_c.dot(S * dp.w_c));  // tr(W_c S)
  }

  double value(const Mat& S) const {
    const double tr_r = radar_gain(S);
    const double tr_c = comm_leak(S);
    const int K = ctx.sc.k_bound;
    double acc = weighted ? 0.0 : std::numeric_limits<double>::infinity();
    for (int k = -K; k <= K; ++k) {
      const std::size_t i = static_cast<std::size_t>(k + K);
      const double term = ctx.sc.gamma_r * tr_r / den_r[i] +
                          num_c[i] / (ctx.sc.gamma_r * tr_c + wc_norm2);
      if (weighted) {
        acc += ctx.sc.weight(k) * term;
      } else {
        acc = std::min(acc, term);
      }
    }
    return acc;
  }

  // First-order surrogate at S0: the radar term is already affine, the
  // passive term is linearized (it is convex in S, so the surrogate is a
  // global under-estimator that is exact at S0).
  std::vector<AffineForm> surrogate(const Mat& S0) const {
    const int K = ctx.sc.k_bound;
    const double d0 = ctx.sc.gamma_r * comm_leak(S0) + wc_norm2;
    const Mat W_r = dp.w_r * dp.w_r.adjoint();
    const Mat W_c = dp.w_c * dp.w_c.adjoint();
    std::vector<AffineForm> forms;
    forms.reserve(static_cast<std::size_t>(2 * K + 1));
    for (int k = -K; k <= K; ++k) {
      const std::size_t i = static_cast<std::size_t>(k + K);
      const double slope = num_c[i] * ctx.sc.gamma_r / (d0 * d0);
      const double constant =
          num_c[i] / d0 + slope * comm_leak(S0);
      forms.emplace_back(constant,
                         (ctx.sc.gamma_r / den_r[i]) * W_r - slope * W_c);
    }
    return forms;
  }
};

}  // namespace

Mat waveform_scp(const DesignContext& ctx, const DesignPoint& dp,
                 bool weighted, const DesignConfig& cfg) {
  const WaveformObjective obj(ctx, dp, weighted);
  const int K = ctx.sc.k_bound;
  const double pr = ctx.sc.power_budget;

  Mat S = dp.s_r * dp.s_r.adjoint();
  double current = obj.value(S);

  for (int it = 0; it < cfg.max_scp; ++it) {
    std::vector<AffineForm> forms = obj.surrogate(S);
    Mat S_next;
    if (weighted) {
      // the weighted sum of affine forms is a single affine objective
      Mat coeff = Mat::Zero(ctx.sc.n, ctx.sc.n);
      for (int k = -K; k <= K; ++k) {
        coeff +=
            ctx.sc.weight(k) * forms[static_cast<std::size_t>(k + K)].coeff();
      }
      S_next = maximize_affine_trace(coeff, pr).first;
    } else {
      const PsdProgram prog = PsdProgram::max_min(std::move(forms), pr);
      S_next = solve_maxmin_affine(prog, cfg.solver, &S).W;
    }
    const double next = obj.value(S_next);
    if (next < current - 1e-6 * (1.0 + std::abs(current))) {
      throw std::runtime_error(
          "waveform_scp: surrogate step decreased the objective (" +
          std::to_string(current) + " -> " + std::to_string(next) + ")");
    }
    if (next >= current) {
      S = std::move(S_next);
    }
    const double improvement = std::max(next, current) - current;
    current = std::max(next, current);
    if (improvement < cfg.epsilon) break;
  }
  return S;
}

Vec round_waveform(const DesignContext& ctx, const DesignPoint& dp,
                   const Mat& S_relaxed, bool weighted,
                   const DesignConfig& cfg, std::uint64_t seed) {
  const double pr = ctx.sc.power_budget;
  if (S_relaxed.trace().real() <= 1e-12 * pr) {
    return dp.s_r;  // waveform does not matter (e.g. gamma_r = 0)
  }
  const auto score = [&](const Vec& cand) {
    DesignPoint trial = dp;
    trial.s_r = std::sqrt(pr) * cand / cand.norm();
    return weighted ? weighted_sum(ctx, trial) : worst_case(ctx, trial);
  };
  const Vec cand =
      randomize_rank_one(S_relaxed, cfg.randomization_trials, score, seed);
  Vec best = std::sqrt(pr) * cand / cand.norm();
  if (score(dp.s_r) >= score(cand)) {
    best = dp.s_r;  // keep the previous waveform on ties or losses
  }
  return best;
}

}  // namespace detail

}  // namespace hyrad
