#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>

namespace genedesign::lbfgs {

// Objective for minimization: fills grad and returns f(x). May return a
// non-finite value to mark x as infeasible; the line search backs off.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct Options {
  int max_iterations = 1000;
  int history = 10;                // stored curvature pairs
  double gradient_tolerance = 1e-6;   // on the max-norm of the gradient
  double f_relative_tolerance = 1e-10;
  int max_line_search_steps = 40;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
};

struct Result {
  Eigen::VectorXd x;       // best point seen
  double f = 0.0;          // objective at x
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string message;
};

// Limited-memory BFGS with a strong-Wolfe line search (two-loop recursion).
// Deterministic: no internal randomness. Throws only if the objective is
// non-finite at x0.
Result minimize(const Objective& objective, const Eigen::VectorXd& x0,
                const Options& options = {});

}  // namespace genedesign::lbfgs
