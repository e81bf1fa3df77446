#include "hyrad/sdp_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "hyrad/detail/maxmin_lp.hpp"
#include "hyrad/rng.hpp"

namespace hyrad {

PsdProgram PsdProgram::max_min(std::vector<AffineForm> forms, double tau) {
  PsdProgram p;
  p.kind = forms.size() == 1 ? ObjectiveKind::SingleAffine
                             : ObjectiveKind::MaxMinAffine;
  p.forms = std::move(forms);
  p.trace_budget = tau;
  p.dim = p.forms.empty() ? 0 : static_cast<int>(p.forms.front().coeff().rows());
  return p;
}

PsdProgram PsdProgram::single(AffineForm form, double tau) {
  return max_min({std::move(form)}, tau);
}

PsdProgram PsdProgram::concave_sqrt(const Mat& shared,
                                    std::vector<double> weights,
                                    const std::vector<Mat>& penalties,
                                    double tau) {
  PsdProgram p;
  p.kind = ObjectiveKind::ConcaveSqrt;
  p.trace_budget = tau;
  p.dim = static_cast<int>(shared.rows());
  p.sqrt_shared = hermitian_part(shared);
  p.sqrt_weights = std::move(weights);
  p.forms.reserve(penalties.size());
  for (const auto& b : penalties) p.forms.emplace_back(0.0, b);
  return p;
}

void PsdProgram::validate() const {
  if (forms.empty()) throw std::invalid_argument("PsdProgram: no forms");
  if (dim < 1) throw std::invalid_argument("PsdProgram: dimension < 1");
  if (!(trace_budget > 0.0) || !std::isfinite(trace_budget)) {
    throw std::invalid_argument("PsdProgram: trace budget must be finite > 0");
  }
  for (const auto& f : forms) {
    if (f.coeff().rows() != dim || f.coeff().cols() != dim) {
      throw std::invalid_argument("PsdProgram: coeff dimension mismatch");
    }
  }
  if (kind == ObjectiveKind::ConcaveSqrt) {
    if (sqrt_shared.rows() != dim || sqrt_weights.size() != forms.size()) {
      throw std::invalid_argument("PsdProgram: bad sqrt data");
    }
    for (double a : sqrt_weights) {
      if (a < 0.0) {
        throw std::invalid_argument("PsdProgram: sqrt weights must be >= 0");
      }
    }
  }
}

namespace detail {

std::pair<double, Vec> leading_eigenpair(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  const Eigen::Index last = a.rows() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

}  // namespace detail

namespace {

// Pool of feasible PSD atoms with trace <= tau; per-form trace inner
// products are kept alongside so the master LP matrix is column-appended.
class AtomPool {
 public:
  AtomPool(const std::vector<AffineForm>& forms, double tau)
      : forms_(forms), tau_(tau), R_(forms.size(), 0) {}

  bool add(Mat atom) {
    const double tr = atom.trace().real();
    if (!(tr > 0.0)) return false;
    if (tr > tau_) atom *= tau_ / tr;
    for (const auto& existing : atoms_) {
      if ((atom - existing).norm() <= 1e-12 * (1.0 + atom.norm())) {
        return false;
      }
    }
    atoms_.push_back(std::move(atom));
    R_.conservativeResize(Eigen::NoChange, atoms_.size());
    const auto j = static_cast<Eigen::Index>(atoms_.size()) - 1;
    for (Eigen::Index k = 0; k < R_.rows(); ++k) {
      R_(k, j) = trace_inner(forms_[static_cast<std::size_t>(k)].coeff(),
                             atoms_.back());
    }
    return true;
  }

  bool add_rank_one(const Vec& q) { return add(tau_ * (q * q.adjoint())); }

  Mat combine(const Eigen::VectorXd& theta) const {
    Mat w = Mat::Zero(forms_.front().coeff().rows(),
                      forms_.front().coeff().cols());
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      if (theta[j] > 0.0) w += theta[j] * atoms_[static_cast<std::size_t>(j)];
    }
    return hermitian_part(w);
  }

  const Eigen::MatrixXd& R() const { return R_; }
  std::size_t size() const { return atoms_.size(); }
  const Mat& atom(std::size_t j) const { return atoms_[j]; }

 private:
  const std::vector<AffineForm>& forms_;
  double tau_;
  std::vector<Mat> atoms_;
  Eigen::MatrixXd R_;
};

double problem_scale(const PsdProgram& prog) {
  double scale = 1.0;
  for (const auto& f : prog.forms) {
    scale = std::max(scale,
                     std::abs(f.constant()) + prog.trace_budget * f.coeff().norm());
  }
  return scale;
}

double min_form_value(const std::vector<AffineForm>& forms, const Mat& w) {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& f : forms) v = std::min(v, f.value(w));
  return v;
}

}  // namespace

SolverResult solve_maxmin_affine(const PsdProgram& prog,
                                 const SolverConfig& cfg,
                                 const Mat* warm_start) {
  prog.validate();
  if (prog.kind == ObjectiveKind::ConcaveSqrt) {
    throw std::invalid_argument("solve_maxmin_affine: wrong objective kind");
  }
  const int n = prog.dim;
  const int m = static_cast<int>(prog.forms.size());
  const double tau = prog.trace_budget;
  const double tol = cfg.rel_tol * problem_scale(prog);

  Eigen::VectorXd constants(m);
  for (int k = 0; k < m; ++k) constants[k] = prog.forms[static_cast<std::size_t>(k)].constant();

  AtomPool pool(prog.forms, tau);
  if (warm_start != nullptr && warm_start->size() > 0) {
    pool.add(hermitian_part(*warm_start));
  }
  for (const auto& f : prog.forms) {
    const auto [lmax, q] = detail::leading_eigenpair(f.coeff());
    (void)lmax;
    pool.add_rank_one(q);
  }
  if (pool.size() == 0) {
    // all candidate atoms degenerate; W = 0 is then optimal up to the forms
    SolverResult res;
    res.W = Mat::Zero(n, n);
    res.objective = constants.minCoeff();
    res.converged = true;
    return res;
  }

  SolverResult best;
  best.W = Mat::Zero(n, n);
  best.objective = constants.minCoeff();
  double upper = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= cfg.max_iters; ++it) {
    const auto lp = detail::solve_maxmin_lp(pool.R(), constants);
    if (!lp.ok) break;

    Mat w = pool.combine(lp.theta);
    const double obj = min_form_value(prog.forms, w);
    if (obj > best.objective) {
      best.objective = obj;
      best.W = std::move(w);
    }

    Mat g = Mat::Zero(n, n);
    for (int k = 0; k < m; ++k) {
      g += lp.duals[k] * prog.forms[static_cast<std::size_t>(k)].coeff();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    const double lmax = es.eigenvalues()(n - 1);
    upper = std::min(upper, lp.duals.dot(constants) + tau * std::max(lmax, 0.0));

    best.iterations = it;
    best.gap = upper - best.objective;
    if (best.gap <= tol) {
      best.converged = true;
      return best;
    }

    bool added = pool.add_rank_one(es.eigenvectors().col(n - 1));
    // near-degenerate top eigenvalues need the whole eigenspace in the pool
    for (int r = 2; r <= n && !added; ++r) {
      if (lmax - es.eigenvalues()(n - r) > 1e-6 * (1.0 + std::abs(lmax))) break;
      added = pool.add_rank_one(es.eigenvectors().col(n - r));
    }
    if (!added) {
      for (int r = 2; r <= n && !added; ++r) {
        added = pool.add_rank_one(es.eigenvectors().col(n - r));
      }
    }
    if (!added) break;  // every eigendirection of the dual matrix is pooled
  }

  // refine with the smoothed path before giving up
  SolverResult fw = detail::solve_maxmin_smoothed_fw(prog, cfg, &best.W);
  if (fw.objective > best.objective) {
    fw.gap = upper - fw.objective;
    fw.converged = fw.gap <= tol;
    return fw;
  }
  best.converged = best.gap <= tol;
  return best;
}

SolverResult detail::solve_maxmin_smoothed_fw(const PsdProgram& prog,
                                              const SolverConfig& cfg,
                                              const Mat* warm_start) {
  prog.validate();
  const int n = prog.dim;
  const int m = static_cast<int>(prog.forms.size());
  const double tau = prog.trace_budget;
  const double scale = problem_scale(prog);
  const double tol = cfg.rel_tol * scale;
  const double log_m = std::log(std::max(2, m));
  const double mu_min = 0.25 * tol / log_m;

  Mat w = (warm_start != nullptr && warm_start->size() > 0)
              ? hermitian_part(*warm_start)
              : Mat::Zero(n, n);
  {
    const double tr = w.trace().real();
    if (tr > tau) w *= tau / tr;
  }

  double mu = std::max(mu_min, cfg.smoothing_temperature * scale * 1e-2);
  Eigen::VectorXd fw_vals(m), fd_vals(m);

  SolverResult res;
  res.W = w;
  res.objective = min_form_value(prog.forms, w);

  for (int it = 1; it <= cfg.max_iters; ++it) {
    for (int k = 0; k < m; ++k) {
      fw_vals[k] = prog.forms[static_cast<std::size_t>(k)].value(w);
    }
    const double fmin = fw_vals.minCoeff();
    Eigen::VectorXd p(m);
    for (int k = 0; k < m; ++k) p[k] = std::exp(-(fw_vals[k] - fmin) / mu);
    p /= p.sum();

    Mat g = Mat::Zero(n, n);
    for (int k = 0; k < m; ++k) {
      g += p[k] * prog.forms[static_cast<std::size_t>(k)].coeff();
    }
    const auto [lmax, q] = leading_eigenpair(g);
    Mat d = Mat::Zero(n, n);
    if (lmax > 0.0) d = tau * (q * q.adjoint());

    const double gap = trace_inner(g, d - w);
    res.iterations = it;
    if (gap + 2.0 * mu * log_m <= tol && mu <= mu_min * (1.0 + 1e-12)) {
      res.objective = fmin;
      res.W = w;
      res.gap = gap + 2.0 * mu * log_m;
      res.converged = true;
      return res;
    }

    // the forms are affine along the segment, so the smoothed objective is a
    // concave scalar function of the step; golden-section is enough
    for (int k = 0; k < m; ++k) {
      fd_vals[k] = prog.forms[static_cast<std::size_t>(k)].value(d);
    }
    const auto smoothed = [&](double t) {
      double lo = std::numeric_limits<double>::infinity();
      for (int k = 0; k < m; ++k) {
        lo = std::min(lo, fw_vals[k] + t * (fd_vals[k] - fw_vals[k]));
      }
      double acc = 0.0;
      for (int k = 0; k < m; ++k) {
        acc += std::exp(-(fw_vals[k] + t * (fd_vals[k] - fw_vals[k]) - lo) / mu);
      }
      return lo - mu * std::log(acc);
    };
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = 1.0;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = smoothed(x1), f2 = smoothed(x2);
    for (int s = 0; s < 48; ++s) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = smoothed(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = smoothed(x1);
      }
    }
    const double step = 0.5 * (a + b);
    w = hermitian_part(w + step * (d - w));
    mu = std::max(mu_min, mu * 0.97);

    const double obj = min_form_value(prog.forms, w);
    if (obj > res.objective) {
      res.objective = obj;
      res.W = w;
    }
  }
  res.converged = false;
  return res;
}

SolverResult solve_concave_sqrt(const PsdProgram& prog,
                                const SolverConfig& cfg,
                                const Mat* warm_start) {
  prog.validate();
  if (prog.kind != ObjectiveKind::ConcaveSqrt) {
    throw std::invalid_argument("solve_concave_sqrt: wrong objective kind");
  }
  const int n = prog.dim;
  const double tau = prog.trace_budget;

  double a_total = 0.0;
  for (double a : prog.sqrt_weights) a_total += a;
  Mat b_total = Mat::Zero(n, n);
  for (const auto& f : prog.forms) b_total += f.coeff();

  SolverResult res;
  res.W = Mat::Zero(n, n);
  res.objective = 0.0;
  if (a_total == 0.0) {  // objective is non-increasing in W
    res.converged = true;
    return res;
  }

  const Mat s = prog.sqrt_shared;
  const double scale =
      std::max(1.0, 2.0 * a_total * std::sqrt(std::max(tau * s.norm(), 0.0)) +
                        tau * b_total.norm());
  const double tol = cfg.rel_tol * scale;

  struct Atom {
    Mat w;
    double x;  // tr(W S)
    double y;  // tr(W B)
  };
  std::vector<Atom> atoms;
  const auto add_atom = [&](Mat w) {
    const double tr = w.trace().real();
    if (!(tr > 0.0)) return false;
    if (tr > tau) w *= tau / tr;
    for (const auto& at : atoms) {
      if ((w - at.w).norm() <= 1e-12 * (1.0 + w.norm())) return false;
    }
    const double x = std::max(0.0, trace_inner(s, w));
    const double y = std::max(0.0, trace_inner(b_total, w));
    atoms.push_back(Atom{std::move(w), x, y});
    return true;
  };

  if (warm_start != nullptr && warm_start->size() > 0) {
    add_atom(hermitian_part(*warm_start));
  }
  {
    const auto [ls, qs] = detail::leading_eigenpair(s);
    if (ls > 0.0) add_atom(tau * (qs * qs.adjoint()));
  }

  const auto value_of = [&](double x, double y) {
    return 2.0 * a_total * std::sqrt(std::max(x, 0.0)) - y;
  };

  for (int it = 1; it <= cfg.max_iters; ++it) {
    // master: maximize over the convex hull of {(0,0)} and the atom points;
    // the objective depends on W only through (x, y)
    struct HullPoint {
      double x, y;
      int atom;  // -1 for the origin
    };
    std::vector<HullPoint> pts;
    pts.push_back({0.0, 0.0, -1});
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      pts.push_back({atoms[j].x, atoms[j].y, static_cast<int>(j)});
    }
    std::sort(pts.begin(), pts.end(), [](const HullPoint& a, const HullPoint& b) {
      return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    std::vector<HullPoint> hull;  // lower hull in y over x
    for (const auto& p : pts) {
      while (hull.size() >= 2) {
        const auto& p1 = hull[hull.size() - 2];
        const auto& p2 = hull[hull.size() - 1];
        const double cross =
            (p2.x - p1.x) * (p.y - p1.y) - (p.x - p1.x) * (p2.y - p1.y);
        if (cross <= 0.0) {
          hull.pop_back();
        } else {
          break;
        }
      }
      if (!hull.empty() && hull.back().x == p.x) continue;  // keep min-y at x
      hull.push_back(p);
    }

    double best_val = 0.0;      // W = 0 baseline
    double best_x = 0.0, best_y = 0.0;
    int best_a = -1, best_b = -1;
    double best_beta = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const double v = value_of(hull[i].x, hull[i].y);
      if (v > best_val) {
        best_val = v;
        best_x = hull[i].x;
        best_y = hull[i].y;
        best_a = hull[i].atom;
        best_b = -2;
        best_beta = 0.0;
      }
      if (i + 1 < hull.size()) {
        const double dx = hull[i + 1].x - hull[i].x;
        const double dy = hull[i + 1].y - hull[i].y;
        if (dx > 0.0 && dy > 0.0) {
          const double slope = dy / dx;
          const double x_star = (a_total / slope) * (a_total / slope);
          if (x_star > hull[i].x && x_star < hull[i + 1].x) {
            const double y_star = hull[i].y + slope * (x_star - hull[i].x);
            const double v_star = value_of(x_star, y_star);
            if (v_star > best_val) {
              best_val = v_star;
              best_x = x_star;
              best_y = y_star;
              best_a = hull[i].atom;
              best_b = hull[i + 1].atom;
              best_beta = (x_star - hull[i].x) / dx;
            }
          }
        }
      }
    }

    Mat w = Mat::Zero(n, n);
    if (best_b == -2) {
      if (best_a >= 0) w = atoms[static_cast<std::size_t>(best_a)].w;
    } else {
      if (best_a >= 0) {
        w += (1.0 - best_beta) * atoms[static_cast<std::size_t>(best_a)].w;
      }
      if (best_b >= 0) w += best_beta * atoms[static_cast<std::size_t>(best_b)].w;
    }

    res.W = w;
    res.objective = best_val;
    res.iterations = it;

    Mat g = -b_total;
    if (best_x > 0.0) g += (a_total / std::sqrt(best_x)) * s;
    const auto [lmax, q] = detail::leading_eigenpair(g);
    const double fw_gap = tau * std::max(lmax, 0.0) - trace_inner(g, w);
    res.gap = fw_gap;
    if (fw_gap <= tol) {
      res.converged = true;
      return res;
    }
    if (!add_atom(tau * (q * q.adjoint()))) break;
  }
  res.converged = res.gap <= tol;
  return res;
}

std::pair<Mat, double> maximize_affine_trace(const Mat& coeff, double tau) {
  if (coeff.rows() != coeff.cols() || coeff.rows() == 0) {
    throw std::invalid_argument("maximize_affine_trace: need square coeff");
  }
  if (!(tau > 0.0)) {
    throw std::invalid_argument("maximize_affine_trace: tau must be > 0");
  }
  const Mat h = hermitian_part(coeff);
  const auto [lmax, q] = detail::leading_eigenpair(h);
  if (lmax > 0.0) {
    return {tau * (q * q.adjoint()), tau * lmax};
  }
  return {Mat::Zero(coeff.rows(), coeff.cols()), 0.0};
}

Vec randomize_rank_one(const Mat& W, int trials,
                       const std::function<double(const Vec&)>& score,
                       std::uint64_t seed) {
  if (trials < 1) {
    throw std::invalid_argument("randomize_rank_one: trials must be >= 1");
  }
  const Mat h = hermitian_part(W);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Eigen::Index n = h.rows();
  const double lmax = es.eigenvalues()(n - 1);
  if (!(lmax > 0.0) || !(h.trace().real() > 1e-14 * n)) {
    throw std::invalid_argument("randomize_rank_one: W is (numerically) zero");
  }

  Mat factor = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > 1e-12 * lmax) {
      factor.col(i) = es.eigenvectors().col(i) * std::sqrt(ev);
    }
  }

  Rng rng(seed);
  Vec best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < trials; ++i) {
    const Vec cand = factor * rng.cnormal_vec(n);
    if (cand.squaredNorm() == 0.0) continue;
    const double sc = score(cand);
    if (sc > best_score) {
      best_score = sc;
      best = cand;
    }
  }
  // leading eigenvector as the deterministic safety candidate
  const Vec eig_cand = es.eigenvectors().col(n - 1) * std::sqrt(lmax);
  const double eig_score = score(eig_cand);
  if (eig_score > best_score || best.size() == 0) {
    best = eig_cand;
  }
  return best;
}

}  // namespace hyrad
