#pragma once

#include "fsvm/types.hpp"

// From-scratch primal linear SVM with squared hinge loss:
//
//   minimize over (w, w0):
//     1/2 ||w||^2 + C/2 * sum_i max(0, 1 - y_i (z_i . w + w0))^2
//
// The bias w0 is not regularized. The objective is convex, differentiable
// and piecewise quadratic; it is minimized by Newton steps in which the set
// of margin violators is recomputed each iteration and the Newton system is
// solved by conjugate gradients on Hessian-vector products, so one step
// costs O(#cg * N * p) without ever forming the Hessian.

namespace fsvm {

/// Binary training problem: rows of `design` are training vectors.
struct SvmProblem {
  Matrix design;
  LabelSequence targets;
  double cost_c = 1.0;
};

struct SvmSolverOptions {
  double tol = 1e-8;    // stop when ||grad|| <= tol * max(1, ||grad at start||)
  int max_iter = 200;   // Newton iterations
  int max_cg_iter = 0;  // per-Newton CG cap; 0 picks min(2*(p+1), 500)
  // CG stops at residual <= cg_rtol * ||grad||; negative picks an adaptive
  // tolerance that tightens as the outer iteration converges.
  double cg_rtol = -1.0;
};

struct SvmSolution {
  LinearModel model;
  double objective_value = 0.0;
  int n_iterations = 0;
  bool converged = false;
  // Solve trace: objective after each Newton update (index 0 is the starting
  // point) and whether the input carried a single class.
  std::vector<double> objective_trace;
  bool single_class = false;
};

/// Trains the squared-hinge linear SVM. `warm_start`, when given, seeds the
/// Newton iteration (the problem is convex, so it only affects speed).
/// Single-class input is solved anyway and flagged in the solution.
/// Non-convergence within max_iter is reported via converged=false, never
/// thrown.
SvmSolution train_l2svm(const SvmProblem& problem, const SvmSolverOptions& options = {},
                        const LinearModel* warm_start = nullptr);

/// Entry i is design.row(i) . weights + bias. Summation runs left to right
/// over columns so that equal inputs give bit-equal scores across callers.
Vector decision_values(const LinearModel& model, const Matrix& design);

/// Exact objective value at (w, w0).
double squared_hinge_objective(const SvmProblem& problem, const LinearModel& model);

}  // namespace fsvm
