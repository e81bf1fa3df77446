#include "hyrad/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hyrad {

namespace {
constexpr int kMaxDriverIters = 100;
}

void RatioFamily::validate() const {
  if (numerators.empty() || numerators.size() != denominators.size() ||
      numerators.size() != offsets.size()) {
    throw std::invalid_argument("RatioFamily: inconsistent sizes");
  }
  const Eigen::Index dim = numerators.front().coeff().rows();
  for (std::size_t k = 0; k < numerators.size(); ++k) {
    if (numerators[k].coeff().rows() != dim ||
        denominators[k].coeff().rows() != dim) {
      throw std::invalid_argument("RatioFamily: dimension mismatch");
    }
  }
}

double RatioFamily::ratio(std::size_t k, const Mat& w) const {
  const double num = numerators[k].value(w);
  const double den = denominators[k].value(w);
  if (den <= 0.0) {
    // only reachable at W ~ 0 when the denominator has no constant term
    return offsets[k] + (std::abs(num) <= 1e-300 ? 0.0
                                                 : std::copysign(
                                                       std::numeric_limits<double>::infinity(),
                                                       num));
  }
  return offsets[k] + num / den;
}

double RatioFamily::min_ratio(const Mat& w) const {
  double v = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < size(); ++k) v = std::min(v, ratio(k, w));
  return v;
}

FractionalResult dinkelbach_maxmin(const RatioFamily& family, double tau,
                                   double eps, const SolverConfig& cfg,
                                   const Mat* warm_start) {
  family.validate();
  if (!(eps > 0.0)) {
    throw std::invalid_argument("dinkelbach_maxmin: eps must be > 0");
  }
  const std::size_t m = family.size();
  const int n = static_cast<int>(family.numerators.front().coeff().rows());

  FractionalResult res;
  res.W = (warm_start != nullptr && warm_start->size() > 0)
              ? hermitian_part(*warm_start)
              : Mat::Zero(n, n);

  double lambda = 0.0;  // Dinkelbach initialization
  for (int it = 1; it <= kMaxDriverIters; ++it) {
    std::vector<AffineForm> forms;
    forms.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      // f_k - lambda g_k with f_k = numerator_k + kappa_k g_k
      const double shift = family.offsets[k] - lambda;
      forms.emplace_back(
          family.numerators[k].constant() +
              shift * family.denominators[k].constant(),
          family.numerators[k].coeff() + shift * family.denominators[k].coeff());
    }
    const PsdProgram prog = PsdProgram::max_min(std::move(forms), tau);
    const Mat warm = res.W;
    SolverResult inner = solve_maxmin_affine(prog, cfg, &warm);
    res.iterations = it;

    // inner optimum at the OLD lambda, recomputed exactly at the candidate
    double eps0 = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
      const double f =
          family.numerators[k].value(inner.W) +
          family.offsets[k] * family.denominators[k].value(inner.W);
      eps0 = std::min(eps0, f - lambda * family.denominators[k].value(inner.W));
    }

    // Accept the candidate only when its ratio does not regress; near the
    // optimum the inner problem can be maximized by degenerate points (for
    // example W = 0 when every denominator lacks a constant term), which
    // carry no ratio information.
    const double lambda_cand = family.min_ratio(inner.W);
    if (it == 1 || lambda_cand >= lambda) {
      res.W = std::move(inner.W);
      lambda = lambda_cand;
    }
    res.trace.push_back(lambda);
    res.lambda = lambda;

    if (!inner.converged) {
      res.converged = false;
      return res;  // partial trace attached for the caller
    }
    if (eps0 <= eps) {
      res.converged = true;
      return res;
    }
  }
  res.converged = false;
  return res;
}

FractionalResult quadratic_transform_sum(const Mat& shared,
                                         const std::vector<Mat>& penalties,
                                         const std::vector<double>& weights,
                                         double tau, double eps,
                                         const SolverConfig& cfg,
                                         const Mat* warm_start) {
  if (penalties.empty() || penalties.size() != weights.size()) {
    throw std::invalid_argument("quadratic_transform_sum: inconsistent sizes");
  }
  if (!(eps > 0.0)) {
    throw std::invalid_argument("quadratic_transform_sum: eps must be > 0");
  }
  const int n = static_cast<int>(shared.rows());
  const std::size_t m = penalties.size();
  const Mat s = hermitian_part(shared);

  FractionalResult res;
  res.W = Mat::Zero(n, n);

  double a_total = 0.0;
  for (double a : weights) {
    if (a < 0.0) {
      throw std::invalid_argument("quadratic_transform_sum: weights >= 0");
    }
    a_total += a;
  }
  if (a_total == 0.0 || s.norm() == 0.0) {
    res.converged = true;
    res.trace.push_back(0.0);
    return res;
  }

  const auto objective = [&](const Mat& w) {
    const double x = trace_inner(s, w);
    if (!(x > 0.0)) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double den = trace_inner(penalties[k], w);
      if (den > 0.0) acc += weights[k] * x / den;
    }
    return acc;
  };

  Mat w = (warm_start != nullptr && warm_start->size() > 0)
              ? hermitian_part(*warm_start)
              : Mat();
  if (w.size() == 0 || !(trace_inner(s, w) > 0.0)) {
    const auto [ls, qs] = detail::leading_eigenpair(s);
    (void)ls;
    w = tau * (qs * qs.adjoint());
  }

  double phi = objective(w);
  res.trace.push_back(phi);
  res.W = w;
  res.lambda = phi;

  for (int it = 1; it <= kMaxDriverIters; ++it) {
    const double x = trace_inner(s, w);
    std::vector<double> slack(m, 0.0);
    std::vector<double> sqrt_w(m, 0.0);
    std::vector<Mat> scaled;
    scaled.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double den = trace_inner(penalties[k], w);
      slack[k] = den > 0.0 ? std::sqrt(std::max(weights[k] * x, 0.0)) / den : 0.0;
      sqrt_w[k] = slack[k] * std::sqrt(weights[k]);
      scaled.push_back(slack[k] * slack[k] * penalties[k]);
    }
    const PsdProgram prog =
        PsdProgram::concave_sqrt(s, std::move(sqrt_w), scaled, tau);
    SolverResult inner = solve_concave_sqrt(prog, cfg, &w);
    res.iterations = it;

    const double phi_new = objective(inner.W);
    if (phi_new >= phi) {  // monotone safeguard against solver noise
      w = std::move(inner.W);
    }
    const double improvement = std::max(phi_new, phi) - phi;
    phi = std::max(phi_new, phi);
    res.trace.push_back(phi);
    res.W = w;
    res.lambda = phi;

    if (!inner.converged) {
      res.converged = false;
      return res;
    }
    if (improvement < eps) {
      res.converged = true;
      return res;
    }
  }
  res.converged = false;
  return res;
}

}  // namespace hyrad
