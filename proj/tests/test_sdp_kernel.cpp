#include <doctest.h>

#include <cmath>

#include "hyrad/detail/maxmin_lp.hpp"
#include "hyrad/rng.hpp"
#include "hyrad/sdp_kernel.hpp"
#include "oracles.hpp"

using namespace hyrad;

namespace {

Mat random_hermitian(Rng& rng, int n, double amp = 1.0) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = amp * rng.cnormal();
  return hermitian_part(a);
}

Mat random_psd(Rng& rng, int n, double amp = 1.0) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = amp * rng.cnormal();
  return a * a.adjoint() / n;
}

void check_result_invariants(const SolverResult& res, double tau) {
  const double tr = res.W.trace().real();
  CHECK(tr <= tau * (1.0 + 1e-8));
  Eigen::SelfAdjointEigenSolver<Mat> es(res.W);
  CHECK(es.eigenvalues().minCoeff() >= -1e-8 * std::max(tr, 1.0));
  CHECK((res.W - res.W.adjoint()).norm() < 1e-12 * (1.0 + res.W.norm()));
}

}  // namespace

TEST_CASE("maxmin LP: hand-checkable instances") {
  // max min(theta_1, theta_2), sum(theta) <= 1  ->  0.5 at (0.5, 0.5)
  Eigen::MatrixXd r(2, 2);
  r << 1, 0, 0, 1;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2);
  const auto res = hyrad::detail::solve_maxmin_lp(r, c);
  REQUIRE(res.ok);
  CHECK(res.value == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(res.theta.sum() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(res.duals[0] == doctest::Approx(0.5).epsilon(1e-8));

  // all columns hurt the objective -> theta = 0, value = min(c)
  Eigen::MatrixXd r2(2, 3);
  r2 << -1, -2, -0.5, -3, -1, -0.25;
  Eigen::VectorXd c2(2);
  c2 << 0.7, -0.2;
  const auto res2 = hyrad::detail::solve_maxmin_lp(r2, c2);
  REQUIRE(res2.ok);
  CHECK(res2.value == doctest::Approx(-0.2).epsilon(1e-10));
  CHECK(res2.theta.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("maxmin LP agrees with a dense grid on random instances") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd r(3, 2);
    Eigen::VectorXd c(3);
    for (int i = 0; i < 3; ++i) {
      c[i] = rng.normal() * 0.3;
      for (int j = 0; j < 2; ++j) r(i, j) = rng.normal();
    }
    const auto res = hyrad::detail::solve_maxmin_lp(r, c);
    REQUIRE(res.ok);
    const double grid = oracle::grid_search_diag2(1.0, 1e-3, [&](double x,
                                                                 double y) {
      double v = 1e300;
      for (int i = 0; i < 3; ++i) {
        v = std::min(v, c[i] + r(i, 0) * x + r(i, 1) * y);
      }
      return v;
    });
    CHECK(res.value >= grid - 1e-9);  // grid points are feasible
    CHECK(res.value <= grid + 3e-3);  // grid resolution bound
    CHECK(res.duals.minCoeff() >= -1e-12);
    CHECK(res.duals.sum() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("single affine form: objective is tau * lambda_max") {
  Rng rng(1);
  const int n = 6;
  const Mat a = random_hermitian(rng, n);
  const double tau = 1.0;
  const PsdProgram prog = PsdProgram::single(AffineForm(0.0, a), tau);
  const SolverConfig cfg;
  const SolverResult res = solve_maxmin_affine(prog, cfg);
  CHECK(res.converged);
  check_result_invariants(res, tau);

  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  const double expected = tau * std::max(es.eigenvalues()(n - 1), 0.0);
  CHECK(res.objective == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("negative-definite coefficients push W to zero") {
  Rng rng(2);
  const int n = 4;
  std::vector<AffineForm> forms;
  std::vector<double> constants = {0.4, -0.3, 0.9};
  for (double c : constants) {
    forms.emplace_back(c, -(random_psd(rng, n) + Mat::Identity(n, n)));
  }
  const SolverResult res =
      solve_maxmin_affine(PsdProgram::max_min(forms, 1.0), SolverConfig{});
  CHECK(res.converged);
  CHECK(res.objective == doctest::Approx(-0.3).epsilon(1e-9));
  CHECK(res.W.trace().real() <= 1e-8);
}

TEST_CASE("two diagonal forms match a dense simplex grid search") {
  Rng rng(3);
  const double tau = 1.0;
  for (int trial = 0; trial < 6; ++trial) {
    Eigen::Vector2d a1, a2;
    double c1 = 0.3 * rng.normal(), c2 = 0.3 * rng.normal();
    for (int i = 0; i < 2; ++i) {
      a1[i] = rng.normal() * 0.8;
      a2[i] = rng.normal() * 0.8;
    }
    std::vector<AffineForm> forms;
    forms.emplace_back(c1, Mat(a1.cast<cdouble>().asDiagonal()));
    forms.emplace_back(c2, Mat(a2.cast<cdouble>().asDiagonal()));
    const SolverResult res =
        solve_maxmin_affine(PsdProgram::max_min(forms, tau), SolverConfig{});
    CHECK(res.converged);
    check_result_invariants(res, tau);

    // diagonal coefficients admit diagonal optimizers
    const double grid = oracle::grid_search_diag2(tau, 1e-3, [&](double x,
                                                                 double y) {
      return std::min(c1 + a1[0] * x + a1[1] * y, c2 + a2[0] * x + a2[1] * y);
    });
    CHECK(std::abs(res.objective - grid) <= 1e-3);
  }
}

TEST_CASE("candidate dominance: solver beats W = 0 and single-form rank-one "
          "candidates") {
  Rng rng(4);
  const int n = 5;
  const double tau = 1.0;
  std::vector<AffineForm> forms;
  for (int k = 0; k < 4; ++k) {
    forms.emplace_back(0.1 * rng.normal(), random_hermitian(rng, n));
  }
  const PsdProgram prog = PsdProgram::max_min(forms, tau);
  const SolverResult res = solve_maxmin_affine(prog, SolverConfig{});
  CHECK(res.converged);

  double at_zero = 1e300;
  for (const auto& f : forms) at_zero = std::min(at_zero, f.constant());
  CHECK(res.objective >= at_zero - 1e-9);

  for (const auto& f : forms) {
    const auto [lmax, q] = detail::leading_eigenpair(f.coeff());
    (void)lmax;
    const Mat cand = tau * (q * q.adjoint());
    double val = 1e300;
    for (const auto& g : forms) val = std::min(val, g.value(cand));
    CHECK(res.objective >= val - 1e-9);
  }
}

TEST_CASE("exchange solver agrees with the smoothed fallback") {
  Rng rng(5);
  const int n = 4;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<AffineForm> forms;
    for (int k = 0; k < 3; ++k) {
      forms.emplace_back(0.2 * rng.normal(), random_hermitian(rng, n));
    }
    const PsdProgram prog = PsdProgram::max_min(forms, 1.0);
    SolverConfig cfg;
    const SolverResult fast = solve_maxmin_affine(prog, cfg);
    cfg.max_iters = 20000;
    cfg.rel_tol = 1e-4;
    const SolverResult slow = detail::solve_maxmin_smoothed_fw(prog, cfg);
    CHECK(fast.objective >= slow.objective - 2e-3);
  }
}

TEST_CASE("concave sqrt: identity instance has optimum 1 at full trace") {
  const int n = 4;
  const PsdProgram prog = PsdProgram::concave_sqrt(
      Mat::Identity(n, n), {1.0}, {Mat::Identity(n, n)}, 1.0);
  const SolverResult res = solve_concave_sqrt(prog, SolverConfig{});
  CHECK(res.converged);
  check_result_invariants(res, 1.0);
  CHECK(res.objective == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(res.W.trace().real() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("concave sqrt: zero weights give W = 0") {
  const int n = 3;
  const PsdProgram prog = PsdProgram::concave_sqrt(
      Mat::Identity(n, n), {0.0, 0.0},
      {Mat::Identity(n, n), Mat::Identity(n, n)}, 1.0);
  const SolverResult res = solve_concave_sqrt(prog, SolverConfig{});
  CHECK(res.converged);
  CHECK(res.objective == doctest::Approx(0.0));
  CHECK(res.W.norm() == doctest::Approx(0.0));
}

TEST_CASE("concave sqrt matches a diagonal grid search") {
  Rng rng(6);
  const double tau = 1.0;
  for (int trial = 0; trial < 6; ++trial) {
    Eigen::Vector2d s, b1, b2;
    for (int i = 0; i < 2; ++i) {
      s[i] = std::abs(rng.normal());
      b1[i] = std::abs(rng.normal());
      b2[i] = std::abs(rng.normal());
    }
    const double a1 = std::abs(rng.normal()), a2 = std::abs(rng.normal());
    const PsdProgram prog = PsdProgram::concave_sqrt(
        Mat(s.cast<cdouble>().asDiagonal()), {a1, a2},
        {Mat(b1.cast<cdouble>().asDiagonal()),
         Mat(b2.cast<cdouble>().asDiagonal())},
        tau);
    const SolverResult res = solve_concave_sqrt(prog, SolverConfig{});
    CHECK(res.converged);
    check_result_invariants(res, tau);

    const double grid = oracle::grid_search_diag2(tau, 1e-3, [&](double x,
                                                                 double y) {
      const double xs = s[0] * x + s[1] * y;
      return 2.0 * (a1 + a2) * std::sqrt(std::max(xs, 0.0)) -
             (b1[0] + b2[0]) * x - (b1[1] + b2[1]) * y;
    });
    CHECK(std::abs(res.objective - grid) <= 1e-3);
  }
}

TEST_CASE("maximize_affine_trace: closed-form cases") {
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const auto [w, obj] = maximize_affine_trace(d, 2.0);
  CHECK(obj == doctest::Approx(6.0));
  CHECK(w(0, 0).real() == doctest::Approx(2.0));
  CHECK(std::abs(w(1, 1)) == doctest::Approx(0.0));

  const auto [w2, obj2] = maximize_affine_trace(-Mat::Identity(3, 3), 1.0);
  CHECK(obj2 == doctest::Approx(0.0));
  CHECK(w2.norm() == doctest::Approx(0.0));
}

TEST_CASE("maximize_affine_trace is consistent with the max-min solver") {
  Rng rng(7);
  const int n = 6;
  for (int trial = 0; trial < 5; ++trial) {
    const Mat a = random_hermitian(rng, n);
    const double tau = 0.5 + std::abs(rng.normal());
    const auto [w, obj] = maximize_affine_trace(a, tau);
    (void)w;
    const SolverResult res = solve_maxmin_affine(
        PsdProgram::single(AffineForm(0.0, a), tau), SolverConfig{});
    const double scale = 1.0 + tau * a.norm();
    CHECK(std::abs(res.objective - obj) <= 1e-5 * scale);
  }
}

TEST_CASE("randomization: rank-one covariance reproduces the direction") {
  Rng rng(8);
  const int n = 5;
  Vec v = rng.cnormal_vec(n);
  const Mat w = v * v.adjoint();
  const Vec probe = rng.cnormal_vec(n);
  const auto score = [&](const Vec& x) {
    return std::norm(probe.dot(x)) / x.squaredNorm();  // degree-0 homogeneous
  };
  const Vec got = randomize_rank_one(w, 50, score, 123);
  CHECK(score(got) == doctest::Approx(score(v)).epsilon(1e-8));
  // collinearity
  const double cos2 =
      std::norm(v.dot(got)) / (v.squaredNorm() * got.squaredNorm());
  CHECK(cos2 == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("randomization never falls below the leading-eigenvector score") {
  Rng rng(9);
  const int n = 6;
  const Mat w = random_psd(rng, n);
  const auto [lmax, q] = detail::leading_eigenpair(w);
  (void)lmax;
  const Vec probe = rng.cnormal_vec(n);
  const auto score = [&](const Vec& x) {
    return std::norm(probe.dot(x)) / x.squaredNorm();
  };
  const Vec got = randomize_rank_one(w, 200, score, 77);
  CHECK(score(got) >= score(q) - 1e-12);
}

TEST_CASE("randomization is deterministic and rejects zero covariance") {
  Rng rng(10);
  const Mat w = random_psd(rng, 4);
  const auto score = [](const Vec& x) { return x.squaredNorm(); };
  const Vec a = randomize_rank_one(w, 30, score, 5);
  const Vec b = randomize_rank_one(w, 30, score, 5);
  CHECK((a - b).norm() == 0.0);
  CHECK_THROWS_AS(randomize_rank_one(Mat::Zero(4, 4), 10, score, 1),
                  std::invalid_argument);
}

TEST_CASE("solver results satisfy the PSD and trace invariants on random "
          "instances") {
  Rng rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform() * 5);
    const int m = 1 + static_cast<int>(rng.uniform() * 6);
    std::vector<AffineForm> forms;
    for (int k = 0; k < m; ++k) {
      forms.emplace_back(rng.normal(), random_hermitian(rng, n));
    }
    const double tau = 0.25 + 2.0 * rng.uniform();
    const SolverResult res =
        solve_maxmin_affine(PsdProgram::max_min(forms, tau), SolverConfig{});
    CHECK(res.converged);
    CHECK(res.gap >= -1e-9);
    check_result_invariants(res, tau);
  }
}
