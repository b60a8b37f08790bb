#include "fsvm/filter_svm.hpp"

#include "fsvm/signal.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace fsvm {

namespace {

void validate_context(const FilterContext& ctx) {
  detail::require(ctx.y.is_binary(), "filter_svm: labels must be binary");
  detail::require(ctx.y.size() == ctx.x.n_samples(),
                  "filter_svm: signal and label lengths differ");
  detail::require(ctx.cost_c > 0.0, "filter_svm: C must be positive");
  detail::require(ctx.reg_lambda >= 0.0, "filter_svm: lambda must be >= 0");
}

}  // namespace

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::MaxOuterIterations: return "max_outer_iterations";
    case StopReason::ObjectiveTolerance: return "objective_tolerance";
    case StopReason::FilterChangeTolerance: return "filter_change_tolerance";
    case StopReason::StationaryPoint: return "stationary_point";
  }
  return "unknown";
}

FilterObjective filter_objective(const FilterBank& fb, const FilterContext& ctx,
                                 const LinearModel* warm_start) {
  validate_context(ctx);
  const SignalMatrix filtered = filter_apply(ctx.x, fb);
  SvmProblem problem{filtered.data, ctx.y, ctx.cost_c};
  FilterObjective out;
  out.inner = train_l2svm(problem, ctx.inner_options, warm_start);
  out.value = out.inner.objective_value + 0.5 * ctx.reg_lambda * fb.coeffs.squaredNorm();
  return out;
}

Matrix filter_gradient(const FilterBank& fb, const SvmSolution& inner,
                       const FilterContext& ctx) {
  validate_context(ctx);
  detail::require(inner.model.weights.size() == ctx.x.n_channels(),
                  "filter_gradient: inner weights and channel count differ");
  detail::require(fb.n_channels() == ctx.x.n_channels(),
                  "filter_gradient: filter bank and signal channel counts differ");

  const Index n = ctx.x.n_samples();
  const Index d = ctx.x.n_channels();
  const Index f = fb.n_taps();
  const Matrix& x = ctx.x.data;

  // r_i = C y_i H_i at the inner optimum; the loss gradient w.r.t. F(m,j) is
  // -w_j * sum_i r_i x(i - m + n0, j).
  const SignalMatrix filtered = filter_apply(ctx.x, fb);
  const Vector scores = decision_values(inner.model, filtered.data);
  Vector r(n);
  for (Index i = 0; i < n; ++i) {
    const double h = 1.0 - ctx.y.labels[i] * scores[i];
    r[i] = h > 0.0 ? ctx.cost_c * ctx.y.labels[i] * h : 0.0;
  }

  Matrix grad(f, d);
  for (Index j = 0; j < d; ++j) {
    const double wj = inner.model.weights[j];
    for (Index m = 0; m < f; ++m) {
      const Index k = fb.delay_n0 - m;
      double corr = 0.0;
      if (k >= 0) {
        const Index len = n - k;
        if (len > 0) corr = r.head(len).dot(x.col(j).segment(k, len));
      } else {
        const Index len = n + k;
        if (len > 0) corr = r.segment(-k, len).dot(x.col(j).head(len));
      }
      grad(m, j) = -wj * corr + ctx.reg_lambda * fb.coeffs(m, j);
    }
  }
  return grad;
}

LineSearchResult filter_line_search(const FilterBank& fb, const Matrix& direction,
                                    const FilterContext& ctx, double value_at_start,
                                    const Matrix& gradient_at_start,
                                    const LinearModel* warm_start,
                                    const LineSearchOptions& options) {
  detail::require(direction.rows() == fb.n_taps() && direction.cols() == fb.n_channels(),
                  "filter_line_search: direction shape mismatch");

  LineSearchResult result;
  const double slope = gradient_at_start.cwiseProduct(direction).sum();
  if (!(slope > 0.0)) {  // moving along -direction would not descend
    result.filter = fb;
    result.inner = filter_objective(fb, ctx, warm_start).inner;
    result.step = 0.0;
    result.objective = value_at_start;
    return result;
  }

  double step = options.initial_step;
  for (int bt = 0; bt < options.max_backtracks; ++bt) {
    FilterBank candidate(fb.coeffs - step * direction, fb.delay_n0);
    FilterObjective probe = filter_objective(candidate, ctx, warm_start);
    if (probe.value <= value_at_start - options.armijo_c1 * step * slope) {
      result.filter = std::move(candidate);
      result.inner = std::move(probe.inner);
      result.step = step;
      result.objective = probe.value;
      return result;
    }
    step *= options.shrink;
  }

  result.filter = fb;
  result.inner = filter_objective(fb, ctx, warm_start).inner;
  result.step = 0.0;
  result.objective = value_at_start;
  return result;
}

FilterModel train_filter_svm(const SignalMatrix& x, const LabelSequence& y, Index f,
                             int n0, double cost_c, double reg_lambda,
                             const StoppingRule& stop,
                             const SvmSolverOptions& inner_options) {
  detail::require(f >= 1, "train_filter_svm: filter length must be >= 1");
  detail::require(n0 >= 0 && n0 <= f, "train_filter_svm: delay must lie in [0, f]");
  detail::require(stop.rel_obj_tol > 0.0 && stop.filter_change_tol > 0.0,
                  "train_filter_svm: stopping tolerances must be positive");
  detail::require(stop.max_outer_iter >= 0,
                  "train_filter_svm: max_outer_iter must be >= 0");
  const FilterContext ctx{x, y, cost_c, reg_lambda, inner_options};
  validate_context(ctx);

  FilterModel model;
  model.cost_c = cost_c;
  model.reg_lambda = reg_lambda;
  model.filter = FilterBank::uniform(f, x.n_channels(), n0);

  FilterObjective current = filter_objective(model.filter, ctx);
  model.trace.objectives.push_back(current.value);
  model.trace.inner_all_converged = current.inner.converged;
  model.trace.stop_reason = StopReason::MaxOuterIterations;

  // Each line search starts from a Barzilai-Borwein guess (falling back to a
  // multiple of the last accepted step) instead of always at 1.0; plain
  // gradient steps otherwise re-pay a long backtracking run, and each
  // backtrack is an inner SVM solve. Armijo acceptance still guards descent.
  LineSearchOptions ls_options;
  Matrix prev_filter, prev_grad;
  for (int iter = 0; iter < stop.max_outer_iter; ++iter) {
    const Matrix grad = filter_gradient(model.filter, current.inner, ctx);
    if (iter > 0) {
      const Matrix s = model.filter.coeffs - prev_filter;
      const Matrix delta_g = grad - prev_grad;
      const double sy = s.cwiseProduct(delta_g).sum();
      const double yy = delta_g.squaredNorm();
      if (sy > 0.0 && yy > 0.0)
        ls_options.initial_step = std::clamp(sy / yy, 1e-12, 1.0);
    }
    prev_filter = model.filter.coeffs;
    prev_grad = grad;

    LineSearchResult ls = filter_line_search(model.filter, grad, ctx, current.value,
                                             grad, &current.inner.model, ls_options);
    if (ls.step == 0.0) {
      model.trace.stop_reason = StopReason::StationaryPoint;
      break;
    }

    const double filter_change = (ls.filter.coeffs - model.filter.coeffs).norm();
    const double filter_norm = model.filter.coeffs.norm();
    const double decrease = current.value - ls.objective;

    model.filter = std::move(ls.filter);
    current.inner = std::move(ls.inner);
    current.value = ls.objective;
    model.trace.objectives.push_back(current.value);
    model.trace.step_sizes.push_back(ls.step);
    ls_options.initial_step = std::min(1.0, 4.0 * ls.step);
    model.trace.inner_all_converged =
        model.trace.inner_all_converged && current.inner.converged;

    if (decrease <= stop.rel_obj_tol * std::max(1.0, std::abs(current.value))) {
      model.trace.stop_reason = StopReason::ObjectiveTolerance;
      break;
    }
    if (filter_change <= stop.filter_change_tol * filter_norm) {
      model.trace.stop_reason = StopReason::FilterChangeTolerance;
      break;
    }
  }

  model.model = current.inner.model;
  return model;
}

FilterModel train_avg_svm(const SignalMatrix& x, const LabelSequence& y, Index f, int n0,
                          double cost_c, double reg_lambda,
                          const SvmSolverOptions& inner_options) {
  StoppingRule frozen;
  frozen.max_outer_iter = 0;
  return train_filter_svm(x, y, f, n0, cost_c, reg_lambda, frozen, inner_options);
}

Prediction predict_filter(const FilterModel& model, const SignalMatrix& x) {
  detail::require(model.n_channels() == x.n_channels(),
                  "predict_filter: channel counts differ");
  const SignalMatrix filtered = filter_apply(x, model.filter);

  Prediction out;
  out.scores = decision_values(model.model, filtered.data);
  IntVector labels(out.scores.size());
  for (Index i = 0; i < out.scores.size(); ++i) labels[i] = out.scores[i] < 0.0 ? -1 : 1;
  out.labels = LabelSequence::binary(std::move(labels));
  return out;
}

Matrix weighted_filter_map(const FilterModel& model) {
  Matrix map = model.filter.coeffs;
  for (Index j = 0; j < map.cols(); ++j) map.col(j) *= model.model.weights[j];
  return map;
}

Vector channel_relevance(const FilterModel& model) {
  const Index d = model.n_channels();
  Vector relevance(d);
  for (Index j = 0; j < d; ++j)
    relevance[j] = std::abs(model.model.weights[j]) * model.filter.coeffs.col(j).norm();
  return relevance;
}

}  // namespace fsvm
