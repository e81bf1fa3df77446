#include <doctest.h>

#include <cmath>

#include "hyrad/fractional.hpp"
#include "hyrad/rng.hpp"
#include "oracles.hpp"

using namespace hyrad;

namespace {

Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Mat random_psd(Rng& rng, int n) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.cnormal();
  return a * a.adjoint() / n;
}

}  // namespace

TEST_CASE("single-ratio Dinkelbach matches a diagonal grid search") {
  Rng rng(31);
  const double tau = 1.0;
  for (int trial = 0; trial < 5; ++trial) {
    const double a1 = std::abs(rng.normal()), a2 = std::abs(rng.normal());
    const double b1 = std::abs(rng.normal()), b2 = std::abs(rng.normal());
    const double c = 0.2 + std::abs(rng.normal());

    RatioFamily fam;
    fam.numerators.emplace_back(0.0, diag2(a1, a2));
    fam.denominators.emplace_back(c, diag2(b1, b2));
    fam.offsets.push_back(0.0);

    const FractionalResult res =
        dinkelbach_maxmin(fam, tau, 1e-6, SolverConfig{});
    CHECK(res.converged);

    const double grid = oracle::grid_search_diag2(tau, 1e-3, [&](double x,
                                                                 double y) {
      return (a1 * x + a2 * y) / (b1 * x + b2 * y + c);
    });
    CHECK(std::abs(res.lambda - grid) <= 1e-3);
  }
}

TEST_CASE("unit ratios converge to lambda = 1 immediately") {
  Rng rng(32);
  RatioFamily fam;
  for (int k = 0; k < 3; ++k) {
    const Mat g = random_psd(rng, 3) + Mat::Identity(3, 3);
    fam.numerators.emplace_back(0.0, g);
    fam.denominators.emplace_back(0.0, g);
    fam.offsets.push_back(0.0);
  }
  const FractionalResult res = dinkelbach_maxmin(fam, 1.0, 0.01, SolverConfig{});
  CHECK(res.converged);
  CHECK(res.lambda == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("first iteration solves the lambda = 0 problem") {
  // single diagonal ratio: at lambda = 0 the inner problem maximizes the
  // numerator alone, so the first trace entry is the ratio at that point
  RatioFamily fam;
  fam.numerators.emplace_back(0.0, diag2(2.0, 1.0));
  fam.denominators.emplace_back(0.5, diag2(3.0, 0.1));
  fam.offsets.push_back(0.0);
  const FractionalResult res = dinkelbach_maxmin(fam, 1.0, 1e-9, SolverConfig{});
  REQUIRE(!res.trace.empty());
  // argmax of tr(W diag(2,1)) over trace <= 1 is W = e_1 e_1^T
  CHECK(res.trace.front() == doctest::Approx(2.0 / 3.5).epsilon(1e-6));
  // ... but the optimum puts weight on the second coordinate
  CHECK(res.lambda == doctest::Approx(1.0 / 0.6).epsilon(1e-5));
}

TEST_CASE("lambda trace is non-decreasing on random families") {
  Rng rng(33);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3, m = 4;
    RatioFamily fam;
    for (int k = 0; k < m; ++k) {
      fam.numerators.emplace_back(0.0, random_psd(rng, n));
      fam.denominators.emplace_back(0.0,
                                    random_psd(rng, n) + Mat::Identity(n, n));
      fam.offsets.push_back(std::abs(rng.normal()));
    }
    const FractionalResult res =
        dinkelbach_maxmin(fam, 1.0, 1e-4, SolverConfig{});
    CHECK(res.converged);
    for (std::size_t i = 1; i < res.trace.size(); ++i) {
      CHECK(res.trace[i] >= res.trace[i - 1] - 1e-10);
    }
    // termination criterion: inner optimum at the pre-update lambda <= eps
    const double lam_prev =
        res.trace.size() >= 2 ? res.trace[res.trace.size() - 2] : 0.0;
    double eps0 = 1e300;
    for (std::size_t k = 0; k < fam.size(); ++k) {
      const double f = fam.numerators[k].value(res.W) +
                       fam.offsets[k] * fam.denominators[k].value(res.W);
      eps0 = std::min(eps0, f - lam_prev * fam.denominators[k].value(res.W));
    }
    CHECK(eps0 <= 1e-4 + 1e-12);
  }
}

TEST_CASE("quadratic transform agrees with Dinkelbach on single ratios") {
  Rng rng(34);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 3;
    const Mat s = random_psd(rng, n);
    const Mat b = random_psd(rng, n) + Mat::Identity(n, n);
    const double a = 0.5 + std::abs(rng.normal());

    const FractionalResult qt =
        quadratic_transform_sum(s, {b}, {a}, 1.0, 1e-8, SolverConfig{});
    CHECK(qt.converged);

    RatioFamily fam;
    fam.numerators.emplace_back(0.0, a * s);
    fam.denominators.emplace_back(0.0, b);
    fam.offsets.push_back(0.0);
    const FractionalResult dk =
        dinkelbach_maxmin(fam, 1.0, 1e-8, SolverConfig{});
    CHECK(dk.converged);

    CHECK(std::abs(qt.lambda - dk.lambda) <=
          1e-3 * (1.0 + std::abs(dk.lambda)));

    // fixed point of the slack update at the returned iterate
    const double x = trace_inner(s, qt.W);
    const double den = trace_inner(b, qt.W);
    const double slack = std::sqrt(a * x) / den;
    CHECK(slack * slack * den * den == doctest::Approx(a * x).epsilon(1e-9));
  }
}

TEST_CASE("quadratic transform: zero weights return W = 0") {
  const Mat s = Mat::Identity(3, 3);
  const FractionalResult res = quadratic_transform_sum(
      s, {Mat::Identity(3, 3)}, {0.0}, 1.0, 1e-6, SolverConfig{});
  CHECK(res.converged);
  CHECK(res.lambda == doctest::Approx(0.0));
  CHECK(res.W.norm() == doctest::Approx(0.0));
}

TEST_CASE("quadratic transform objective is non-decreasing") {
  Rng rng(35);
  const int n = 4, m = 3;
  const Mat s = random_psd(rng, n);
  std::vector<Mat> bs;
  std::vector<double> as;
  for (int k = 0; k < m; ++k) {
    bs.push_back(random_psd(rng, n) + Mat::Identity(n, n));
    as.push_back(std::abs(rng.normal()));
  }
  const FractionalResult res =
      quadratic_transform_sum(s, bs, as, 1.0, 1e-8, SolverConfig{});
  CHECK(res.converged);
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    CHECK(res.trace[i] >= res.trace[i - 1] - 1e-10);
  }
}
