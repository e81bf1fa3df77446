#include "hyrad/detail/maxmin_lp.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hyrad::detail {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr int kBlandAfter = 400;
constexpr int kMaxPivots = 5000;

}  // namespace

// Epigraph form: maximize eta' subject to
//   eta' - (R theta)_k + s_k = c_k - shift   (k = 0..m-1, rhs >= 1)
//   sum(theta) + s_m = 1
// with shift = min_k c_k - 1 so that the all-slack basis is feasible and the
// optimal eta' is strictly positive. Inputs are normalized to O(1) before
// pivoting; the reported value is scaled back.
MaxMinLpResult solve_maxmin_lp(const Eigen::MatrixXd& R,
                               const Eigen::VectorXd& c) {
  const int m = static_cast<int>(R.rows());
  const int J = static_cast<int>(R.cols());
  if (m < 1 || c.size() != m) {
    throw std::invalid_argument("solve_maxmin_lp: bad dimensions");
  }

  double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  if (J > 0) scale = std::max(scale, R.cwiseAbs().maxCoeff());
  const Eigen::MatrixXd Rn = R / scale;
  const Eigen::VectorXd cn = c / scale;

  const double shift = cn.minCoeff() - 1.0;
  const int n = J + 1 + m + 1;  // theta, eta', slacks
  const int eta_col = J;
  const int slack0 = J + 1;

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, n);
  Eigen::VectorXd b(m + 1);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < J; ++j) T(k, j) = -Rn(k, j);
    T(k, eta_col) = 1.0;
    T(k, slack0 + k) = 1.0;
    b[k] = cn[k] - shift;
  }
  for (int j = 0; j < J; ++j) T(m, j) = 1.0;
  T(m, slack0 + m) = 1.0;
  b[m] = 1.0;

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n);
  cost[eta_col] = 1.0;

  std::vector<int> basis(m + 1);
  for (int i = 0; i <= m; ++i) basis[i] = slack0 + i;

  MaxMinLpResult res;
  for (int pivot = 0; pivot < kMaxPivots; ++pivot) {
    // reduced costs r_j = c_j - c_B^T T(:,j)
    Eigen::VectorXd cb(m + 1);
    for (int i = 0; i <= m; ++i) cb[i] = cost[basis[i]];
    Eigen::VectorXd red = cost - T.transpose() * cb;

    int enter = -1;
    if (pivot < kBlandAfter) {
      double best = kCostTol;
      for (int j = 0; j < n; ++j) {
        if (red[j] > best) {
          best = red[j];
          enter = j;
        }
      }
    } else {  // Bland's rule
      for (int j = 0; j < n; ++j) {
        if (red[j] > kCostTol) {
          enter = j;
          break;
        }
      }
    }

    if (enter < 0) {  // optimal
      res.theta = Eigen::VectorXd::Zero(J);
      for (int i = 0; i <= m; ++i) {
        if (basis[i] < J) res.theta[basis[i]] = b[i];
      }
      double eta = 0.0;
      for (int i = 0; i <= m; ++i) {
        if (basis[i] == eta_col) eta = b[i];
      }
      res.value = (eta + shift) * scale;
      res.duals = Eigen::VectorXd(m);
      for (int k = 0; k < m; ++k) {
        res.duals[k] = std::max(0.0, -red[slack0 + k]);
      }
      const double dual_sum = res.duals.sum();
      if (dual_sum > 0.0) {
        res.duals /= dual_sum;
      } else {
        res.duals.setConstant(1.0 / m);
      }
      res.ok = true;
      return res;
    }

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= m; ++i) {
      if (T(i, enter) > kPivotTol) {
        const double ratio = b[i] / T(i, enter);
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 &&
             (leave < 0 || basis[i] < basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) {  // unbounded; cannot happen for well-formed input
      res.ok = false;
      return res;
    }

    const double piv = T(leave, enter);
    T.row(leave) /= piv;
    b[leave] /= piv;
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = T(i, enter);
      if (f != 0.0) {
        T.row(i) -= f * T.row(leave);
        b[i] -= f * b[leave];
        if (b[i] < 0.0 && b[i] > -1e-12) b[i] = 0.0;
      }
    }
    basis[leave] = enter;
  }

  res.ok = false;
  return res;
}

}  // namespace hyrad::detail
