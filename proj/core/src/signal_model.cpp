#include "hyrad/signal_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hyrad {

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

// Raised cosine in symbol units, peak at x = 0.
double raised_cosine_value(double x, double beta) {
  if (beta > 0.0) {
    // removable singularity at |x| = 1/(2 beta)
    if (std::abs(std::abs(2.0 * beta * x) - 1.0) < 1e-9) {
      return 0.25 * M_PI * sinc(0.5 / beta);
    }
    const double b = 2.0 * beta * x;
    return sinc(x) * std::cos(M_PI * beta * x) / (1.0 - b * b);
  }
  return sinc(x);
}

}  // namespace

PulseShape raised_cosine_taps(double rolloff, int samples_per_symbol,
                              int span_symbols) {
  if (!(rolloff >= 0.0 && rolloff <= 1.0)) {
    throw std::domain_error("raised_cosine_taps: rolloff must be in [0,1]");
  }
  if (samples_per_symbol < 1 || span_symbols < 1) {
    throw std::invalid_argument("raised_cosine_taps: P and I must be >= 1");
  }
  const int len = samples_per_symbol * span_symbols;
  const double center = 0.5 * len;
  RealVec taps(len);
  for (int t = 0; t < len; ++t) {
    taps[t] = raised_cosine_value((t - center) / samples_per_symbol, rolloff);
  }
  return PulseShape{rolloff, samples_per_symbol, span_symbols, std::move(taps)};
}

CommWaveformModel build_waveform_matrix(const PulseShape& shape,
                                        int symbol_count) {
  if (symbol_count < 1) {
    throw std::invalid_argument("build_waveform_matrix: L must be >= 1");
  }
  const int P = shape.samples_per_symbol;
  const int I = shape.span_symbols;
  if (shape.taps.size() != static_cast<Eigen::Index>(P) * I) {
    throw std::invalid_argument("build_waveform_matrix: taps length != I*P");
  }
  const int L = symbol_count;
  const int M = (L + I - 1) * P;
  Mat H = Mat::Zero(M, L);
  for (int j = 0; j < L; ++j) {
    for (int t = 0; t < I * P; ++t) {
      H(j * P + t, j) = shape.taps[t];
    }
  }
  return CommWaveformModel{std::move(H), L, P, I, M};
}

int shift_window_start(int k, int n, int m) {
  if (n < 1 || m < n) {
    throw std::invalid_argument("shift_window_start: need 1 <= n <= m");
  }
  if ((m - n) % 2 != 0) {
    throw std::invalid_argument(
        "shift_window_start: (m - n) must be even so the nominal window is "
        "centered");
  }
  const int bar = (m - n) / 2 - k;
  if (bar < 0 || bar + n > m) {
    throw std::out_of_range("shift_window_start: window [" +
                            std::to_string(bar) + ", " +
                            std::to_string(bar + n) + ") outside [0, " +
                            std::to_string(m) + ")");
  }
  return bar;
}

RealMat build_shift_matrix(int k, int n, int m) {
  const int bar = shift_window_start(k, n, m);
  RealMat J = RealMat::Zero(n, m);
  for (int i = 0; i < n; ++i) J(i, bar + i) = 1.0;
  return J;
}

Mat comm_covariance(const CommWaveformModel& model, int k, int n) {
  const int bar = shift_window_start(k, n, model.M);
  const Mat window = model.H.middleRows(bar, n);
  return hermitian_part(window * window.adjoint());
}

double Scenario::weight(int k) const {
  if (k < -k_bound || k > k_bound) {
    throw std::out_of_range("Scenario::weight: |k| > K");
  }
  if (weights.size() == 0) return 1.0;
  return weights[k + k_bound];
}

void Scenario::validate() const {
  if (gamma_r < 0.0 || gamma_c < 0.0) {
    throw std::invalid_argument("Scenario: channel SNRs must be nonnegative");
  }
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("Scenario: sigma2 must be positive");
  }
  if (n < 1) throw std::invalid_argument("Scenario: n must be >= 1");
  if (k_bound < 0) throw std::invalid_argument("Scenario: K must be >= 0");
  if (!(power_budget > 0.0)) {
    throw std::invalid_argument("Scenario: power budget must be positive");
  }
  if (weights.size() != 0) {
    if (weights.size() != 2 * k_bound + 1) {
      throw std::invalid_argument("Scenario: weights must have length 2K+1");
    }
    bool any_positive = false;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
      if (weights[i] < 0.0) {
        throw std::invalid_argument("Scenario: weights must be nonnegative");
      }
      any_positive = any_positive || weights[i] > 0.0;
    }
    if (!any_positive) {
      throw std::invalid_argument("Scenario: at least one weight positive");
    }
  }
}

void Scenario::validate_with(const CommWaveformModel& model) const {
  validate();
  if (model.M < n) {
    throw std::invalid_argument("Scenario: pulse longer than burst (N > M)");
  }
  if ((model.M - n) % 2 != 0) {
    throw std::invalid_argument("Scenario: (M - N) must be even");
  }
  if (k_bound > (model.M - n) / 2) {
    throw std::invalid_argument("Scenario: K exceeds (M - N)/2");
  }
}

void DesignPoint::validate(double power_budget) const {
  if (s_r.size() == 0 || w_r.size() != s_r.size() || w_c.size() != s_r.size()) {
    throw std::invalid_argument("DesignPoint: inconsistent vector lengths");
  }
  if (s_r.squaredNorm() > power_budget * (1.0 + 1e-9)) {
    throw std::invalid_argument("DesignPoint: waveform exceeds power budget");
  }
  if (!(w_r.squaredNorm() > 0.0) || !(w_c.squaredNorm() > 0.0)) {
    throw std::invalid_argument("DesignPoint: filters must be nonzero");
  }
}

DelayCovariances::DelayCovariances(const CommWaveformModel& model, int n,
                                   int bound)
    : bound_(bound) {
  if (bound < 0) throw std::invalid_argument("DelayCovariances: bound < 0");
  sigma_.reserve(static_cast<std::size_t>(2 * bound + 1));
  for (int k = -bound; k <= bound; ++k) {
    sigma_.push_back(comm_covariance(model, k, n));
  }
}

double sinr_k_with(const Scenario& sc, const DesignPoint& dp,
                   const Mat& sigma) {
  const double cross_r = std::norm(dp.w_r.dot(dp.s_r));
  const double num_r = sc.gamma_r * cross_r;
  const double den_r =
      sc.gamma_c * quad_form(dp.w_r, sigma) + dp.w_r.squaredNorm();
  const double num_c = sc.gamma_c * quad_form(dp.w_c, sigma);
  const double den_c =
      sc.gamma_r * std::norm(dp.w_c.dot(dp.s_r)) + dp.w_c.squaredNorm();
  return num_r / den_r + num_c / den_c;
}

double sinr_k(const Scenario& sc, const DesignPoint& dp,
              const CommWaveformModel& model, int k) {
  return sinr_k_with(sc, dp, comm_covariance(model, k, sc.n));
}

double worst_case_sinr(const Scenario& sc, const DesignPoint& dp,
                       const DelayCovariances& cov) {
  double worst = std::numeric_limits<double>::infinity();
  for (int k = -sc.k_bound; k <= sc.k_bound; ++k) {
    worst = std::min(worst, sinr_k_with(sc, dp, cov.at(k)));
  }
  return worst;
}

double worst_case_sinr(const Scenario& sc, const DesignPoint& dp,
                       const CommWaveformModel& model) {
  return worst_case_sinr(sc, dp, DelayCovariances(model, sc.n, sc.k_bound));
}

double weighted_sum_sinr(const Scenario& sc, const DesignPoint& dp,
                         const DelayCovariances& cov) {
  double sum = 0.0;
  for (int k = -sc.k_bound; k <= sc.k_bound; ++k) {
    sum += sc.weight(k) * sinr_k_with(sc, dp, cov.at(k));
  }
  return sum;
}

double weighted_sum_sinr(const Scenario& sc, const DesignPoint& dp,
                         const CommWaveformModel& model) {
  return weighted_sum_sinr(sc, dp, DelayCovariances(model, sc.n, sc.k_bound));
}

int geometric_delay_offset(const Eigen::Vector2d& target,
                           const Eigen::Vector2d& radar,
                           const Eigen::Vector2d& io,
                           const Eigen::Vector2d& delta, double t_s) {
  if (!(t_s > 0.0)) {
    throw std::invalid_argument("geometric_delay_offset: t_s must be > 0");
  }
  const auto delay_diff = [&](const Eigen::Vector2d& pos) {
    return (pos - radar).norm() - (pos - io).norm();
  };
  const double nominal = delay_diff(target);
  const double actual = delay_diff(target + delta);
  return static_cast<int>(std::llround((actual - nominal) / t_s));
}

}  // namespace hyrad
