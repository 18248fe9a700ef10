#include "genedesign/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include "genedesign/errors.hpp"

namespace genedesign::lbfgs {

namespace {

struct Evaluation {
  double f;
  Eigen::VectorXd x;
  Eigen::VectorXd grad;
};

class LineSearch {
 public:
  LineSearch(const Objective& objective, const Options& options, int dim)
      : objective_(objective), options_(options) {
    trial_.x.resize(dim);
    trial_.grad.resize(dim);
  }

  int evaluations() const { return evaluations_; }

  // Strong-Wolfe search along d from (x0, f0, g0) with slope dphi0 < 0.
  // Returns true and fills `out` on success.
  bool search(const Eigen::VectorXd& x0, double f0, const Eigen::VectorXd& g0,
              const Eigen::VectorXd& d, double initial_step, Evaluation& out) {
    const double dphi0 = g0.dot(d);
    if (!(dphi0 < 0.0)) return false;

    double a_prev = 0.0, phi_prev = f0;
    double a = initial_step;
    for (int i = 0; i < options_.max_line_search_steps; ++i) {
      const double phi_a = eval(x0, d, a);
      const bool armijo_fail =
          !std::isfinite(phi_a) || phi_a > f0 + options_.wolfe_c1 * a * dphi0;
      if (armijo_fail || (i > 0 && phi_a >= phi_prev))
        return zoom(x0, f0, dphi0, d, a_prev, phi_prev, a, out);
      const double dphi_a = trial_.grad.dot(d);
      if (std::abs(dphi_a) <= -options_.wolfe_c2 * dphi0) {
        out = trial_;
        return true;
      }
      if (dphi_a >= 0.0) return zoom(x0, f0, dphi0, d, a, phi_a, a_prev, out);
      a_prev = a;
      phi_prev = phi_a;
      a *= 2.0;
    }
    return false;
  }

 private:
  double eval(const Eigen::VectorXd& x0, const Eigen::VectorXd& d, double a) {
    trial_.x = x0 + a * d;
    trial_.f = objective_(trial_.x, trial_.grad);
    ++evaluations_;
    return trial_.f;
  }

  // Bisection zoom between a step satisfying Armijo (lo) and one that does
  // not (hi). Falls back to the best Armijo point when curvature cannot be
  // met within the step budget.
  bool zoom(const Eigen::VectorXd& x0, double f0, double dphi0,
            const Eigen::VectorXd& d, double a_lo, double phi_lo, double a_hi,
            Evaluation& out) {
    bool have_lo_eval = false;
    Evaluation lo_eval;
    for (int j = 0; j < options_.max_line_search_steps; ++j) {
      const double a = 0.5 * (a_lo + a_hi);
      const double phi_a = eval(x0, d, a);
      if (!std::isfinite(phi_a) || phi_a > f0 + options_.wolfe_c1 * a * dphi0 ||
          phi_a >= phi_lo) {
        a_hi = a;
        continue;
      }
      const double dphi_a = trial_.grad.dot(d);
      if (std::abs(dphi_a) <= -options_.wolfe_c2 * dphi0) {
        out = trial_;
        return true;
      }
      if (dphi_a * (a_hi - a_lo) >= 0.0) a_hi = a_lo;
      a_lo = a;
      phi_lo = phi_a;
      lo_eval = trial_;
      have_lo_eval = true;
    }
    // Armijo holds at lo even though curvature never did.
    if (have_lo_eval && a_lo > 0.0) {
      out = lo_eval;
      return true;
    }
    return false;
  }

  const Objective& objective_;
  const Options& options_;
  Evaluation trial_;
  int evaluations_ = 0;
};

}  // namespace

Result minimize(const Objective& objective, const Eigen::VectorXd& x0,
                const Options& options) {
  const int dim = static_cast<int>(x0.size());
  Result result;
  result.x = x0;
  Eigen::VectorXd grad(dim);
  double f = objective(x0, grad);
  if (!std::isfinite(f))
    throw Error("NonFiniteObjective", "objective is not finite at the initial point");
  result.f = f;
  result.evaluations = 1;

  LineSearch line_search(objective, options, dim);
  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  double gamma = 1.0;

  Eigen::VectorXd x = x0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (grad.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) {
      result.converged = true;
      result.message = "gradient tolerance reached";
      break;
    }

    // Two-loop recursion for the quasi-Newton direction.
    Eigen::VectorXd q = grad;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[static_cast<std::size_t>(i)] =
          rho_hist[static_cast<std::size_t>(i)] * s_hist[static_cast<std::size_t>(i)].dot(q);
      q -= alpha[static_cast<std::size_t>(i)] * y_hist[static_cast<std::size_t>(i)];
    }
    q *= gamma;
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Eigen::VectorXd direction = -q;
    if (!(direction.dot(grad) < 0.0)) {
      // Degenerate curvature model; restart from steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      gamma = 1.0;
      direction = -grad;
    }

    const double initial_step =
        s_hist.empty() ? std::min(1.0, 1.0 / grad.lpNorm<Eigen::Infinity>()) : 1.0;
    Evaluation next;
    bool ok = line_search.search(x, f, grad, direction, initial_step, next);
    if (!ok && !s_hist.empty()) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      gamma = 1.0;
      direction = -grad;
      ok = line_search.search(x, f, grad, direction,
                              std::min(1.0, 1.0 / grad.lpNorm<Eigen::Infinity>()), next);
    }
    if (!ok) {
      result.message = "line search failed";
      break;
    }

    const Eigen::VectorXd s = next.x - x;
    const Eigen::VectorXd y = next.grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-10 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      gamma = sy / y.squaredNorm();
    }

    const double f_prev = f;
    x = next.x;
    f = next.f;
    grad = next.grad;
    result.iterations = iter + 1;
    if (f < result.f) {
      result.f = f;
      result.x = x;
    }
    if (f_prev - f <= options.f_relative_tolerance *
                          std::max({std::abs(f_prev), std::abs(f), 1.0})) {
      result.converged = true;
      result.message = "objective improvement below tolerance";
      break;
    }
  }
  result.evaluations += line_search.evaluations();
  if (result.message.empty()) result.message = "iteration limit reached";
  return result;
}

}  // namespace genedesign::lbfgs
