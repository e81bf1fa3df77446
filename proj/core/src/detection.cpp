#include "hyrad/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "hyrad/rng.hpp"

namespace hyrad {

namespace {

int resolve_threads(int requested, long long trials) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  int t = requested > 0 ? requested : hw;
  const long long per = 4096;
  if (trials / per < t) t = static_cast<int>(std::max<long long>(1, trials / per));
  return t;
}

template <typename Fn>
void parallel_chunks(long long total, int threads, Fn&& fn) {
  if (threads <= 1) {
    fn(0, total);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const long long chunk = (total + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const long long begin = t * chunk;
    const long long end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

double energy_statistic(const Vec& w_r, const Vec& w_c, const Vec& y) {
  double acc = 0.0;
  if (w_r.size() > 0) acc += std::norm(w_r.dot(y));
  if (w_c.size() > 0) acc += std::norm(w_c.dot(y));
  return acc;
}

double calibrate_threshold(const Vec& w_r, const Vec& w_c, double sigma2,
                           double p_f, long long trials, std::uint64_t seed,
                           int threads) {
  if (!(p_f > 0.0 && p_f < 1.0)) {
    throw std::invalid_argument("calibrate_threshold: p_f must be in (0,1)");
  }
  if (static_cast<double>(trials) * p_f < 10.0) {
    throw std::invalid_argument(
        "calibrate_threshold: need trials * p_f >= 10");
  }
  const Eigen::Index n = w_r.size() > 0 ? w_r.size() : w_c.size();
  const double sigma = std::sqrt(sigma2);

  std::vector<double> stats(static_cast<std::size_t>(trials));
  parallel_chunks(trials, resolve_threads(threads, trials),
                  [&](long long begin, long long end) {
                    for (long long i = begin; i < end; ++i) {
                      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
                      const Vec y = sigma * rng.cnormal_vec(n);
                      stats[static_cast<std::size_t>(i)] =
                          energy_statistic(w_r, w_c, y);
                    }
                  });

  // empirical (1 - p_f) quantile: order statistic ceil((1-p_f) n)
  const long long rank = static_cast<long long>(
      std::ceil((1.0 - p_f) * static_cast<double>(trials)));
  const long long idx = std::clamp<long long>(rank - 1, 0, trials - 1);
  std::nth_element(stats.begin(), stats.begin() + idx, stats.end());
  return stats[static_cast<std::size_t>(idx)];
}

double calibrate_threshold(const DesignPoint& dp, double sigma2, double p_f,
                           long long trials, std::uint64_t seed) {
  return calibrate_threshold(dp.w_r, dp.w_c, sigma2, p_f, trials, seed);
}

double missing_probability(const DetectorSetup& setup,
                           const CommWaveformModel& model, double sigma2,
                           double zeta, double avg_snr_db, long long trials,
                           std::uint64_t seed, int threads) {
  if (trials < 1) {
    throw std::invalid_argument("missing_probability: trials must be >= 1");
  }
  const Eigen::Index n = setup.s_r.size();
  const int bar = shift_window_start(0, static_cast<int>(n), model.M);
  const Mat window = model.H.middleRows(bar, n);  // s_c = window * b, k = 0
  const double snr = std::pow(10.0, avg_snr_db / 10.0);
  const double alpha_std = std::sqrt(snr * sigma2);
  const double sigma = std::sqrt(sigma2);

  const int nthreads = resolve_threads(threads, trials);
  std::vector<long long> misses(static_cast<std::size_t>(nthreads), 0);
  const long long chunk = (trials + nthreads - 1) / nthreads;
  parallel_chunks(trials, nthreads, [&](long long begin, long long end) {
    const std::size_t slot = static_cast<std::size_t>(begin / chunk);
    long long local = 0;
    Vec y(n);
    for (long long i = begin; i < end; ++i) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
      y.setZero();
      if (setup.active_path) {
        const cdouble alpha_r = alpha_std * rng.cnormal();
        y += alpha_r * setup.s_r;
      }
      if (setup.passive_path) {
        const cdouble alpha_c = alpha_std * rng.cnormal();
        const Vec b = rng.rademacher(model.L).cast<cdouble>();
        Vec s_c = window * b;
        s_c /= s_c.norm();  // unit energy per trial
        y += alpha_c * s_c;
      }
      y += sigma * rng.cnormal_vec(n);
      if (energy_statistic(setup.w_r, setup.w_c, y) <= zeta) ++local;
    }
    misses[slot] = local;
  });

  long long total = 0;
  for (long long m : misses) total += m;
  return static_cast<double>(total) / static_cast<double>(trials);
}

double missing_probability(const DesignPoint& dp,
                           const CommWaveformModel& model, const Scenario& sc,
                           double zeta, double avg_snr_db, long long trials,
                           std::uint64_t seed) {
  DetectorSetup setup{"hybrid", dp.s_r, dp.w_r, dp.w_c, true, true};
  return missing_probability(setup, model, sc.sigma2, zeta, avg_snr_db, trials,
                             seed);
}

std::vector<DetectionCurve> detection_curves(
    const std::vector<DetectorSetup>& setups, const CommWaveformModel& model,
    double sigma2, const DetectionConfig& cfg) {
  std::vector<DetectionCurve> curves;
  curves.reserve(setups.size());
  for (std::size_t s = 0; s < setups.size(); ++s) {
    const auto& setup = setups[s];
    DetectionCurve curve;
    curve.name = setup.name;
    curve.snr_db = cfg.snr_grid_db;
    curve.pm.resize(cfg.snr_grid_db.size());
    curve.half_width.resize(cfg.snr_grid_db.size());
    const std::uint64_t setup_seed = derive_seed(cfg.seed, 0x1000 + s);
    curve.zeta = calibrate_threshold(setup.w_r, setup.w_c, sigma2, cfg.p_f,
                                     cfg.trials_h0, setup_seed, cfg.threads);
    for (Eigen::Index g = 0; g < cfg.snr_grid_db.size(); ++g) {
      const std::uint64_t point_seed =
          derive_seed(setup_seed, 0x2000 + static_cast<std::uint64_t>(g));
      const double pm =
          missing_probability(setup, model, sigma2, curve.zeta,
                              cfg.snr_grid_db[g], cfg.trials_h1, point_seed,
                              cfg.threads);
      curve.pm[g] = pm;
      curve.half_width[g] =
          1.96 * std::sqrt(pm * (1.0 - pm) /
                           static_cast<double>(cfg.trials_h1));
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace hyrad
