#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyrad/signal_model.hpp"

namespace hyrad {

/// Monte Carlo setup for the energy-detector experiment. Trials are seeded
/// per-index from the master seed, so parallel and sequential runs produce
/// identical results.
struct DetectionConfig {
  double p_f = 1e-4;
  long long trials_h0 = 1000000;
  long long trials_h1 = 100000;
  RealVec snr_grid_db;
  std::uint64_t seed = 42;
  int threads = 0;  // 0 = hardware concurrency
};

/// One receiver under test. Zero filters are allowed (the corresponding
/// statistic term vanishes); the path flags control which target echoes are
/// present under H1.
struct DetectorSetup {
  std::string name;
  Vec s_r;
  Vec w_r;
  Vec w_c;
  bool active_path = true;
  bool passive_path = true;
};

struct DetectionCurve {
  std::string name;
  RealVec snr_db;
  RealVec pm;
  RealVec half_width;  // binomial 95% half-widths
  double zeta = 0.0;
};

/// |w_r^H y|^2 + |w_c^H y|^2.
double energy_statistic(const Vec& w_r, const Vec& w_c, const Vec& y);

/// Empirical (1 - p_f) quantile of the statistic under noise-only trials.
/// Requires trials * p_f >= 10.
double calibrate_threshold(const Vec& w_r, const Vec& w_c, double sigma2,
                           double p_f, long long trials, std::uint64_t seed,
                           int threads = 0);
double calibrate_threshold(const DesignPoint& dp, double sigma2, double p_f,
                           long long trials, std::uint64_t seed);

/// Miss fraction at the given average SNR: per trial the target amplitudes
/// are independent circular complex Gaussians with E|alpha|^2 = snr * sigma2
/// on each included path, the passive waveform is built from fresh binary
/// symbols and normalized to unit energy, and a miss is declared when the
/// statistic falls at or below zeta.
double missing_probability(const DetectorSetup& setup,
                           const CommWaveformModel& model, double sigma2,
                           double zeta, double avg_snr_db, long long trials,
                           std::uint64_t seed, int threads = 0);
double missing_probability(const DesignPoint& dp,
                           const CommWaveformModel& model, const Scenario& sc,
                           double zeta, double avg_snr_db, long long trials,
                           std::uint64_t seed);

/// Calibrates one threshold per setup and sweeps the SNR grid.
std::vector<DetectionCurve> detection_curves(
    const std::vector<DetectorSetup>& setups, const CommWaveformModel& model,
    double sigma2, const DetectionConfig& cfg);

}  // namespace hyrad
