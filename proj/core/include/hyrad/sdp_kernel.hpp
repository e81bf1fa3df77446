#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "hyrad/types.hpp"

namespace hyrad {

/// W -> constant + Re tr(W coeff). coeff is symmetrized on construction so
/// the value is real for Hermitian W.
class AffineForm {
 public:
  AffineForm() = default;
  AffineForm(double constant, const Mat& coeff)
      : constant_(constant), coeff_(hermitian_part(coeff)) {}

  double constant() const { return constant_; }
  const Mat& coeff() const { return coeff_; }
  double value(const Mat& w) const {
    return constant_ + trace_inner(coeff_, w);
  }

 private:
  double constant_ = 0.0;
  Mat coeff_;
};

enum class ObjectiveKind { MaxMinAffine, ConcaveSqrt, SingleAffine };

/// Convex subproblem over the spectrahedron {W >= 0, tr(W) <= trace_budget}.
/// For ConcaveSqrt the objective is
///   sum_k [ 2 sqrt_weights[k] * sqrt(tr(W sqrt_shared)) - tr(W forms[k].coeff) ]
/// with sqrt_shared and all forms[k].coeff PSD.
struct PsdProgram {
  int dim = 0;
  double trace_budget = 1.0;
  ObjectiveKind kind = ObjectiveKind::MaxMinAffine;
  std::vector<AffineForm> forms;
  Mat sqrt_shared;
  std::vector<double> sqrt_weights;

  static PsdProgram max_min(std::vector<AffineForm> forms, double tau);
  static PsdProgram single(AffineForm form, double tau);
  static PsdProgram concave_sqrt(const Mat& shared,
                                 std::vector<double> weights,
                                 const std::vector<Mat>& penalties, double tau);
  void validate() const;
};

struct SolverConfig {
  int max_iters = 5000;
  double rel_tol = 1e-5;
  double smoothing_temperature = 1.0;  // used by the smoothed fallback path
  std::uint64_t seed = 0;
};

struct SolverResult {
  Mat W;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double gap = 0.0;  // certified optimality gap at termination
};

/// Maximizes min_k forms[k](W) over the spectrahedron. Conditional-gradient
/// scheme with a leading-eigenvector linear oracle and a fully corrective
/// master step (small exact LP over the collected rank-one atoms); the dual
/// weights of the master give a certified upper bound, so termination is at
/// a verified gap <= rel_tol * problem scale.
SolverResult solve_maxmin_affine(const PsdProgram& prog,
                                 const SolverConfig& cfg,
                                 const Mat* warm_start = nullptr);

/// Maximizes the ConcaveSqrt objective over the spectrahedron. Same oracle;
/// the master step reduces to an exact search over a 2-D convex hull because
/// the objective depends on W only through tr(W S) and tr(W B).
SolverResult solve_concave_sqrt(const PsdProgram& prog,
                                const SolverConfig& cfg,
                                const Mat* warm_start = nullptr);

/// max tr(W coeff) over the spectrahedron, in closed form:
/// W = tau q q^H on the leading eigenvector when lambda_max > 0, else W = 0.
std::pair<Mat, double> maximize_affine_trace(const Mat& coeff, double tau);

/// Draws trials circularly-symmetric complex Gaussian vectors with
/// covariance W, appends the leading eigenvector of W as a final candidate,
/// and returns the candidate with the highest score (ties broken by sample
/// order). Deterministic for a given seed. Throws for W ~ 0.
Vec randomize_rank_one(const Mat& W, int trials,
                       const std::function<double(const Vec&)>& score,
                       std::uint64_t seed);

namespace detail {

/// Log-sum-exp smoothed conditional gradient with line search; kept as a
/// slower fallback and as an independent cross-check of the exchange solver.
SolverResult solve_maxmin_smoothed_fw(const PsdProgram& prog,
                                      const SolverConfig& cfg,
                                      const Mat* warm_start = nullptr);

/// Leading eigenpair of a Hermitian matrix.
std::pair<double, Vec> leading_eigenpair(const Mat& a);

}  // namespace detail

}  // namespace hyrad
