#pragma once

#include <Eigen/Dense>

namespace hyrad::detail {

/// Solution of   max_theta min_k (c_k + (R theta)_k)
///               s.t. theta >= 0, sum(theta) <= 1.
struct MaxMinLpResult {
  Eigen::VectorXd theta;  // size J
  double value = 0.0;     // optimal min_k
  Eigen::VectorXd duals;  // size m, nonnegative, sums to 1
  bool ok = false;
};

/// Dense primal simplex on the epigraph LP. R is m x J with m the number of
/// min terms and J the number of columns. Sizes here are tiny (m <= ~16,
/// J <= a few hundred), so a full-tableau method is adequate.
MaxMinLpResult solve_maxmin_lp(const Eigen::MatrixXd& R,
                               const Eigen::VectorXd& c);

}  // namespace hyrad::detail
