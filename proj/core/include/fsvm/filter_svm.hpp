#pragma once

#include "fsvm/svm.hpp"
#include "fsvm/types.hpp"

#include <vector>

// Joint learning of a per-channel FIR filter bank F and a linear classifier
// (w, w0) on the filtered samples. The decision value for sample i is
//
//   sum_{m,j} w_j F(m,j) x(i + 1 - m + n0, j) + w0
//
// and the training objective, for fixed filter F, is
//
//   J(F) = min_{w,w0} 1/2 ||w||^2 + C/2 sum_i max(0, 1 - y_i score_i)^2
//
// which is the inner linear SVM on the filtered data. The outer problem
// minimizes J(F) + lambda/2 ||F||_F^2 by gradient descent on F with a
// backtracking line search; J(F) is differentiable at the inner optimum, so
// the gradient only needs the optimal (w*, w0*). Without the lambda term the
// problem is ill-posed: (alpha F, w/alpha) leaves the decision function
// unchanged, so the scale of F must be pinned by the penalty.
//
// The outer objective is non-convex; training runs a single descent from the
// uniform filter F = 1/f and records the whole descent trace.

namespace fsvm {

/// Read-only problem bundle shared by the outer-loop operations.
struct FilterContext {
  const SignalMatrix& x;
  const LabelSequence& y;
  double cost_c = 1.0;
  double reg_lambda = 1.0;  // lambda >= 0; 0 is accepted for diagnostics
  SvmSolverOptions inner_options{};
};

struct FilterObjective {
  double value = 0.0;  // J(F) + lambda/2 ||F||_F^2
  SvmSolution inner;   // optimal (w*, w0*) on the filtered data
};

/// Filters x through fb, solves the inner SVM (optionally warm-started), and
/// returns the regularized outer objective together with the inner solution.
FilterObjective filter_objective(const FilterBank& fb, const FilterContext& ctx,
                                 const LinearModel* warm_start = nullptr);

/// Gradient of the outer objective at fb, assuming `inner` is optimal there:
///
///   d/dF(m,j) = -C * sum_i y_i w*_j x(i+1-m+n0, j) H_i  +  lambda F(m,j)
///
/// where H_i = max(0, 1 - y_i score_i) at the inner optimum.
Matrix filter_gradient(const FilterBank& fb, const SvmSolution& inner,
                       const FilterContext& ctx);

struct LineSearchOptions {
  double armijo_c1 = 1e-4;
  double shrink = 0.5;
  double initial_step = 1.0;
  int max_backtracks = 30;
};

struct LineSearchResult {
  FilterBank filter;
  SvmSolution inner;
  double step = 0.0;       // 0 means no acceptable step was found
  double objective = 0.0;  // outer objective at `filter`
};

/// Backtracking search for F <- F - step * direction satisfying the Armijo
/// condition. Every probe re-solves the inner SVM, so accepted objectives are
/// exact. A non-descent direction or exhausted backtracking returns step = 0
/// with the filter unchanged.
LineSearchResult filter_line_search(const FilterBank& fb, const Matrix& direction,
                                    const FilterContext& ctx, double value_at_start,
                                    const Matrix& gradient_at_start,
                                    const LinearModel* warm_start = nullptr,
                                    const LineSearchOptions& options = {});

/// Outer-loop stopping rule. filter_change_tol is relative: the loop stops
/// when ||F_new - F||_F <= filter_change_tol * ||F||_F.
struct StoppingRule {
  double rel_obj_tol = 1e-4;
  double filter_change_tol = 1e-5;
  int max_outer_iter = 100;
};

enum class StopReason {
  MaxOuterIterations,    // also reported for frozen-filter runs (0 iterations)
  ObjectiveTolerance,    // relative objective decrease below rel_obj_tol
  FilterChangeTolerance, // relative filter change below filter_change_tol
  StationaryPoint,       // zero gradient or exhausted line search
};

const char* to_string(StopReason reason);

struct DescentTrace {
  std::vector<double> objectives;  // outer objective, index 0 = initial filter
  std::vector<double> step_sizes;  // accepted step per outer iteration
  StopReason stop_reason = StopReason::MaxOuterIterations;
  bool inner_all_converged = true;
};

struct FilterModel {
  FilterBank filter;
  LinearModel model;  // channel weights w (length d) and bias w0
  double cost_c = 1.0;
  double reg_lambda = 1.0;
  DescentTrace trace;

  Index n_channels() const { return filter.n_channels(); }
};

/// Runs the descent: F starts uniform at 1/f, each iteration takes the
/// gradient as the search direction and line-searches along it, and the loop
/// stops on relative objective change, relative filter change, a stationary
/// point, or max_outer_iter. stop.max_outer_iter = 0 trains the classifier
/// with the filter frozen at 1/f.
FilterModel train_filter_svm(const SignalMatrix& x, const LabelSequence& y, Index f,
                             int n0, double cost_c, double reg_lambda,
                             const StoppingRule& stop = {},
                             const SvmSolverOptions& inner_options = {});

/// The averaging baseline: the frozen-filter special case above. lambda only
/// shifts the reported objective, never the model.
FilterModel train_avg_svm(const SignalMatrix& x, const LabelSequence& y, Index f, int n0,
                          double cost_c, double reg_lambda = 1.0,
                          const SvmSolverOptions& inner_options = {});

/// Scores every sample (decision_values on the filtered data, so the two
/// routes agree exactly) and thresholds at zero; sign(0) maps to +1.
Prediction predict_filter(const FilterModel& model, const SignalMatrix& x);

/// The space-time map w_j * F(m,j), the quantity worth plotting.
Matrix weighted_filter_map(const FilterModel& model);

/// Per-channel relevance |w_j| * ||F(.,j)||; channels the model has
/// effectively eliminated score near zero.
Vector channel_relevance(const FilterModel& model);

}  // namespace fsvm
