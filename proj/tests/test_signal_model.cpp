#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hyrad/rng.hpp"
#include "hyrad/signal_model.hpp"
#include "oracles.hpp"

using namespace hyrad;

namespace {

CommWaveformModel toy_model(int P, int I, int L, double rolloff = 0.22) {
  return build_waveform_matrix(raised_cosine_taps(rolloff, P, I), L);
}

Vec random_cvec(Rng& rng, int n) { return rng.cnormal_vec(n); }

}  // namespace

TEST_CASE("raised cosine reduces to sinc at zero rolloff") {
  const PulseShape shape = raised_cosine_taps(0.0, 4, 1);
  REQUIRE(shape.taps.size() == 4);
  for (int t = 0; t < 4; ++t) {
    const double x = (t - 2.0) / 4.0;
    const double expected = x == 0.0 ? 1.0 : std::sin(M_PI * x) / (M_PI * x);
    CHECK(shape.taps[t] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("default pulse: 16 finite taps, peak at the window midpoint") {
  const PulseShape shape = raised_cosine_taps(0.22, 8, 2);
  REQUIRE(shape.taps.size() == 16);
  for (int t = 0; t < 16; ++t) CHECK(std::isfinite(shape.taps[t]));
  CHECK(shape.taps[8] == doctest::Approx(1.0));
  for (int d = 1; d < 8; ++d) {
    CHECK(shape.taps[8 + d] == doctest::Approx(shape.taps[8 - d]));
  }
}

TEST_CASE("taps match a dense independent evaluation, including the rolloff "
          "singularity") {
  // rolloff 0.5 puts the removable singularity exactly on the sample grid
  for (double rolloff : {0.22, 0.5, 1.0}) {
    const int P = 8, I = 4;
    const PulseShape shape = raised_cosine_taps(rolloff, P, I);
    double max_abs = 0.0;
    for (int i = 0; i < 1000 * P * I; ++i) {
      const double x = (i / 1000.0 - 0.5 * P * I) / P;
      max_abs = std::max(max_abs, std::abs(oracle::raised_cosine(x, rolloff)));
    }
    for (int t = 0; t < P * I; ++t) {
      const double x = (t - 0.5 * P * I) / P;
      CHECK(shape.taps[t] ==
            doctest::Approx(oracle::raised_cosine(x, rolloff)).epsilon(1e-6));
      CHECK(std::abs(shape.taps[t]) <= max_abs + 1e-9);
    }
  }
}

TEST_CASE("rolloff outside [0,1] is a domain error") {
  CHECK_THROWS_AS(raised_cosine_taps(-0.1, 4, 1), std::domain_error);
  CHECK_THROWS_AS(raised_cosine_taps(1.1, 4, 1), std::domain_error);
  CHECK_THROWS_AS(raised_cosine_taps(0.5, 0, 1), std::invalid_argument);
}

TEST_CASE("waveform matrix dimensions and banded structure") {
  const CommWaveformModel model = toy_model(8, 2, 10);
  CHECK(model.M == 88);
  CHECK(model.H.rows() == 88);
  CHECK(model.H.cols() == 10);
  for (int j = 0; j < model.L; ++j) {
    for (int r = 0; r < model.M; ++r) {
      const bool in_band = r >= j * model.P && r < j * model.P + model.I * model.P;
      if (!in_band) CHECK(model.H(r, j) == cdouble(0, 0));
    }
  }
}

TEST_CASE("single-symbol model equals the tap vector") {
  const PulseShape shape = raised_cosine_taps(0.22, 4, 2);
  const CommWaveformModel model = build_waveform_matrix(shape, 1);
  REQUIRE(model.M == 8);
  for (int r = 0; r < 8; ++r) {
    CHECK(model.H(r, 0) == cdouble(shape.taps[r], 0));
  }
}

TEST_CASE("H b reproduces the direct convolution sum") {
  const PulseShape shape = raised_cosine_taps(0.22, 8, 2);
  const CommWaveformModel model = build_waveform_matrix(shape, 10);
  Rng rng(7);
  std::vector<oracle::cd> b(10);
  Vec be(10);
  for (int l = 0; l < 10; ++l) {
    b[l] = rng.cnormal();
    be[l] = b[l];
  }
  std::vector<double> g(shape.taps.data(), shape.taps.data() + shape.taps.size());
  const auto expected = oracle::conv_sum(g, 8, b);
  const Vec got = model.H * be;
  REQUIRE(static_cast<int>(expected.size()) == model.M);
  for (int p = 0; p < model.M; ++p) {
    CHECK(std::abs(got[p] - expected[p]) < 1e-12);
  }
}

TEST_CASE("shift matrix selects the expected window") {
  const int n = 4, m = 12;  // (m-n)/2 = 4
  const RealMat j0 = build_shift_matrix(0, n, m);
  RealVec ramp(m);
  for (int i = 0; i < m; ++i) ramp[i] = i;
  const RealVec w0 = j0 * ramp;
  CHECK(w0[0] == 4.0);  // nominal mid window
  const RealVec w1 = build_shift_matrix(1, n, m) * ramp;
  CHECK(w1[0] == 3.0);  // positive k starts one sample earlier

  for (int k = -4; k <= 4; ++k) {
    const RealMat jk = build_shift_matrix(k, n, m);
    for (int r = 0; r < n; ++r) CHECK(jk.row(r).sum() == 1.0);
    for (int c = 0; c < m; ++c) CHECK(jk.col(c).sum() <= 1.0);
  }
  CHECK_THROWS_AS(build_shift_matrix(5, n, m), std::out_of_range);
  CHECK_THROWS_AS(build_shift_matrix(0, 4, 11), std::invalid_argument);
}

TEST_CASE("covariances are Hermitian PSD and match the selection identity") {
  const CommWaveformModel model = toy_model(2, 2, 4);  // M = 10
  const int n = 4;                                     // (M-N)/2 = 3
  for (int k = -3; k <= 3; ++k) {
    const Mat sigma = comm_covariance(model, k, n);
    CHECK((sigma - sigma.adjoint()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);

    const RealMat jk = build_shift_matrix(k, n, model.M);
    const Mat expected = jk.cast<cdouble>() * model.H *
                         model.H.adjoint() * jk.cast<cdouble>().transpose();
    CHECK((sigma - expected).norm() < 1e-14);
  }
}

TEST_CASE("impulse taps give an identity covariance") {
  PulseShape impulse;
  impulse.rolloff = 0.0;
  impulse.samples_per_symbol = 1;
  impulse.span_symbols = 1;
  impulse.taps = RealVec::Ones(1);
  const CommWaveformModel model = build_waveform_matrix(impulse, 8);
  const Mat sigma = comm_covariance(model, 0, 4);
  CHECK((sigma - Mat::Identity(4, 4)).norm() < 1e-15);
}

TEST_CASE("covariance matches a triple-loop computation") {
  const CommWaveformModel model = toy_model(2, 2, 4);
  const int n = 4;
  const int bar = shift_window_start(1, n, model.M);
  const Mat sigma = comm_covariance(model, 1, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      oracle::cd acc(0, 0);
      for (int p = 0; p < model.L; ++p) {
        acc += model.H(bar + i, p) * std::conj(model.H(bar + j, p));
      }
      CHECK(std::abs(sigma(i, j) - acc) < 1e-14);
    }
  }
}

TEST_CASE("matched filter with no passive path gives gamma_r") {
  const CommWaveformModel model = toy_model(2, 2, 4);
  Scenario sc;
  sc.gamma_r = 3.5;
  sc.gamma_c = 0.0;
  sc.n = 4;
  DesignPoint dp;
  dp.s_r = Vec::Ones(4) / 2.0;  // unit energy
  dp.w_r = dp.s_r;
  dp.w_c = Vec::Unit(4, 0);
  CHECK(sinr_k(sc, dp, model, 0) == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("sinr is invariant to filter scaling and matches the scalar oracle") {
  const CommWaveformModel model = toy_model(2, 2, 4);
  Scenario sc;
  sc.gamma_r = 2.0;
  sc.gamma_c = 1.3;
  sc.n = 4;
  Rng rng(11);
  DesignPoint dp;
  dp.s_r = random_cvec(rng, 4);
  dp.w_r = random_cvec(rng, 4);
  dp.w_c = random_cvec(rng, 4);

  const double base = sinr_k(sc, dp, model, 1);

  // scalar-loop oracle
  const Mat sigma = comm_covariance(model, 1, 4);
  std::vector<std::vector<oracle::cd>> sig(4, std::vector<oracle::cd>(4));
  std::vector<oracle::cd> s(4), wr(4), wc(4);
  for (int i = 0; i < 4; ++i) {
    s[i] = dp.s_r[i];
    wr[i] = dp.w_r[i];
    wc[i] = dp.w_c[i];
    for (int j = 0; j < 4; ++j) sig[i][j] = sigma(i, j);
  }
  CHECK(base == doctest::Approx(oracle::sinr_scalar(2.0, 1.3, s, wr, wc, sig))
                    .epsilon(1e-12));

  // degree-0 homogeneity in each filter separately
  DesignPoint scaled = dp;
  scaled.w_r *= cdouble(0.3, -1.7);
  scaled.w_c *= cdouble(-2.1, 0.4);
  CHECK(sinr_k(sc, scaled, model, 1) == doctest::Approx(base).epsilon(1e-12));

  // waveform scaling: recompute through the oracle rather than asserting a
  // monotonicity claim
  DesignPoint boosted = dp;
  boosted.s_r *= 2.0;
  for (int i = 0; i < 4; ++i) s[i] = boosted.s_r[i];
  CHECK(sinr_k(sc, boosted, model, 1) ==
        doctest::Approx(oracle::sinr_scalar(2.0, 1.3, s, wr, wc, sig))
            .epsilon(1e-12));
}

TEST_CASE("worst case and weighted sum reduce to sinr_0 at K = 0") {
  const CommWaveformModel model = toy_model(2, 2, 4);
  Scenario sc;
  sc.gamma_r = 1.0;
  sc.gamma_c = 0.7;
  sc.n = 4;
  sc.k_bound = 0;
  Rng rng(3);
  DesignPoint dp{random_cvec(rng, 4), random_cvec(rng, 4), random_cvec(rng, 4)};
  const double s0 = sinr_k(sc, dp, model, 0);
  CHECK(worst_case_sinr(sc, dp, model) == doctest::Approx(s0));
  CHECK(weighted_sum_sinr(sc, dp, model) == doctest::Approx(s0));
}

TEST_CASE("worst case bounds and weighted-sum enumeration") {
  const CommWaveformModel model = toy_model(2, 2, 6);  // M = 14
  Scenario sc;
  sc.gamma_r = 1.4;
  sc.gamma_c = 0.9;
  sc.n = 4;
  sc.k_bound = 2;
  sc.weights = RealVec::LinSpaced(5, 0.5, 1.5);
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    DesignPoint dp{random_cvec(rng, 4), random_cvec(rng, 4),
                   random_cvec(rng, 4)};
    const double worst = worst_case_sinr(sc, dp, model);
    const double wsum = weighted_sum_sinr(sc, dp, model);
    double by_hand = 0.0;
    for (int k = -2; k <= 2; ++k) {
      const double v = sinr_k(sc, dp, model, k);
      CHECK(worst <= v + 1e-12);
      by_hand += sc.weight(k) * v;
    }
    CHECK(wsum == doctest::Approx(by_hand).epsilon(1e-12));
    CHECK(worst <= wsum / (0.5 * 5) + 1e-12);
  }
}

TEST_CASE("weighted sum is invariant under a joint permutation of weights "
          "and delays") {
  const CommWaveformModel model = toy_model(2, 2, 6);
  Scenario sc;
  sc.gamma_r = 1.0;
  sc.gamma_c = 1.0;
  sc.n = 4;
  sc.k_bound = 2;
  sc.weights = (RealVec(5) << 0.1, 0.4, 1.0, 0.2, 0.3).finished();
  Rng rng(9);
  DesignPoint dp{random_cvec(rng, 4), random_cvec(rng, 4), random_cvec(rng, 4)};
  const double wsum = weighted_sum_sinr(sc, dp, model);
  // accumulate the same sum with delays visited in a shuffled order
  const int order[5] = {3, 0, 4, 1, 2};
  double shuffled = 0.0;
  for (int idx : order) {
    const int k = idx - 2;
    shuffled += sc.weight(k) * sinr_k(sc, dp, model, k);
  }
  CHECK(shuffled == doctest::Approx(wsum).epsilon(1e-12));
}

TEST_CASE("scenario validation rejects bad inputs") {
  const CommWaveformModel model = toy_model(2, 2, 4);  // M = 10
  Scenario sc;
  sc.gamma_r = 1.0;
  sc.gamma_c = 1.0;
  sc.n = 4;
  sc.k_bound = 4;  // exceeds (M-N)/2 = 3
  CHECK_THROWS_AS(sc.validate_with(model), std::invalid_argument);
  sc.k_bound = 1;
  sc.weights = (RealVec(3) << 0.0, -0.1, 0.0).finished();
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  sc.weights = RealVec::Zero(3);
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  sc.weights = RealVec::Ones(3);
  CHECK_NOTHROW(sc.validate_with(model));

  Scenario odd = sc;
  odd.n = 5;  // M - N odd
  CHECK_THROWS_AS(odd.validate_with(model), std::invalid_argument);
}

TEST_CASE("geometric delay offset: sign convention and random geometry") {
  const Eigen::Vector2d target(0, 0), radar(-10, 0), io(10, 0);
  CHECK(geometric_delay_offset(target, radar, io, {0, 0}, 1.0) == 0);
  // moving the target toward the IO makes the offset positive
  CHECK(geometric_delay_offset(target, radar, io, {3, 0}, 1.0) > 0);
  CHECK(geometric_delay_offset(target, radar, io, {-3, 0}, 1.0) < 0);

  std::mt19937 gen(17);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Vector2d tg(u(gen), u(gen)), rd(u(gen), u(gen)),
        pio(u(gen), u(gen)), dl(u(gen) / 10, u(gen) / 10);
    const double d1 = std::hypot(tg.x() - rd.x(), tg.y() - rd.y()) -
                      std::hypot(tg.x() - pio.x(), tg.y() - pio.y());
    const double d2 =
        std::hypot(tg.x() + dl.x() - rd.x(), tg.y() + dl.y() - rd.y()) -
        std::hypot(tg.x() + dl.x() - pio.x(), tg.y() + dl.y() - pio.y());
    const int expected = static_cast<int>(std::llround((d2 - d1) / 0.25));
    CHECK(geometric_delay_offset(tg, rd, pio, dl, 0.25) == expected);
  }
}
