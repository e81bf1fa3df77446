#pragma once

#include <vector>

#include "hyrad/sdp_kernel.hpp"
#include "hyrad/types.hpp"

namespace hyrad {

/// Family of ratios f_k(W)/g_k(W) + kappa_k over the spectrahedron, with
/// nonnegative affine numerators and denominators that stay positive on the
/// feasible set away from W = 0.
struct RatioFamily {
  std::vector<AffineForm> numerators;
  std::vector<AffineForm> denominators;
  std::vector<double> offsets;

  std::size_t size() const { return numerators.size(); }
  void validate() const;
  /// kappa_k + f_k(W)/g_k(W), with the 0/0 corner mapped to kappa_k.
  double ratio(std::size_t k, const Mat& w) const;
  double min_ratio(const Mat& w) const;
};

/// Iterates of a fractional driver. For the max-min driver `lambda` is the
/// achieved worst-case ratio and `trace` the per-iteration lambda values;
/// for the sum driver they hold the weighted-sum objective.
struct FractionalResult {
  Mat W;
  double lambda = 0.0;
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
};

/// Parametric max-min fractional programming: alternates the inner problem
///   max_W min_k (f_k(W) - lambda g_k(W)),  f_k = numerator_k + kappa_k g_k,
/// over {W >= 0, tr(W) <= tau} with the lambda update min_k f_k/g_k, and
/// stops when the inner optimum drops to eps. The inner solver is warm
/// started with the previous iterate, which keeps the lambda trace
/// non-decreasing even with inexact subproblem solutions.
FractionalResult dinkelbach_maxmin(const RatioFamily& family, double tau,
                                   double eps, const SolverConfig& cfg,
                                   const Mat* warm_start = nullptr);

/// Sum-of-ratios driver for sum_k a_k tr(W S) / tr(W B_k): alternates the
/// concave surrogate maximization (slack variables fixed) with the
/// closed-form slack update lambda_k = sqrt(a_k tr(W S)) / tr(W B_k).
/// Stops when the objective improvement falls below eps.
FractionalResult quadratic_transform_sum(const Mat& shared,
                                         const std::vector<Mat>& penalties,
                                         const std::vector<double>& weights,
                                         double tau, double eps,
                                         const SolverConfig& cfg,
                                         const Mat* warm_start = nullptr);

}  // namespace hyrad
