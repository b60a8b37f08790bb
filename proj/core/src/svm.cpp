#include "fsvm/svm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsvm {

namespace {

void validate_problem(const SvmProblem& p) {
  detail::require(p.design.rows() >= 1, "train_l2svm: empty design matrix");
  detail::require(p.targets.is_binary(), "train_l2svm: targets must be binary");
  detail::require(p.targets.size() == p.design.rows(),
                  "train_l2svm: design rows and target length differ");
  detail::require(p.cost_c > 0.0, "train_l2svm: C must be positive");
  detail::require_finite(p.design, "train_l2svm: design");
}

// Objective, with margins already computed as s = Xw + w0.
double objective_from_scores(const Vector& y, const Vector& scores, const Vector& w,
                             double c) {
  const Index n = y.size();
  double loss = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double h = 1.0 - y[i] * scores[i];
    if (h > 0.0) loss += h * h;
  }
  return 0.5 * w.squaredNorm() + 0.5 * c * loss;
}

}  // namespace

SvmSolution train_l2svm(const SvmProblem& problem, const SvmSolverOptions& options,
                        const LinearModel* warm_start) {
  validate_problem(problem);
  const Matrix& x = problem.design;
  const Index n = x.rows();
  const Index p = x.cols();
  const double c = problem.cost_c;

  Vector y(n);
  for (Index i = 0; i < n; ++i) y[i] = static_cast<double>(problem.targets.labels[i]);

  SvmSolution sol;
  sol.single_class = (y.maxCoeff() == y.minCoeff());

  Vector w = Vector::Zero(p);
  double b = 0.0;
  if (warm_start != nullptr) {
    detail::require(warm_start->weights.size() == p,
                    "train_l2svm: warm start dimension mismatch");
    detail::require_finite(warm_start->weights, "train_l2svm: warm start");
    w = warm_start->weights;
    b = warm_start->bias;
  }

  const int max_cg = options.max_cg_iter > 0
                         ? options.max_cg_iter
                         : static_cast<int>(std::min<Index>(2 * (p + 1), 500));

  Vector scores = x * w;
  scores.array() += b;
  double obj = objective_from_scores(y, scores, w, c);
  sol.objective_trace.push_back(obj);

  // r_i = C * y_i * h_i on the active set, 0 elsewhere; the gradient is
  // (w - X^T r, -sum r).
  Vector r(n), active(n);
  auto refresh_active = [&]() {
    for (Index i = 0; i < n; ++i) {
      const double h = 1.0 - y[i] * scores[i];
      if (h > 0.0) {
        active[i] = 1.0;
        r[i] = c * y[i] * h;
      } else {
        active[i] = 0.0;
        r[i] = 0.0;
      }
    }
  };

  Vector grad_w(p), dir_w(p), cg_r(p), cg_p(p), hp_w(p), tmp_n(n);
  double grad_b = 0.0, dir_b = 0.0;
  double grad_norm0 = -1.0;

  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    refresh_active();
    grad_w.noalias() = w - x.transpose() * r;
    grad_b = -r.sum();
    const double grad_norm = std::sqrt(grad_w.squaredNorm() + grad_b * grad_b);
    if (grad_norm0 < 0.0) grad_norm0 = grad_norm;
    if (grad_norm <= options.tol * std::max(1.0, grad_norm0)) {
      sol.converged = true;
      break;
    }

    // CG on the Newton system H d = -g with the active set frozen;
    // H (v, vb) = (v + C X^T a(Xv + vb), C 1^T a(Xv + vb)).
    dir_w.setZero();
    dir_b = 0.0;
    cg_r = -grad_w;
    double cg_rb = -grad_b;
    cg_p = cg_r;
    double cg_pb = cg_rb;
    double rho = cg_r.squaredNorm() + cg_rb * cg_rb;
    const double cg_tol2 = [&] {
      const double eta =
          options.cg_rtol >= 0.0
              ? options.cg_rtol
              : std::min(0.1, std::sqrt(grad_norm / std::max(grad_norm0, 1e-300)));
      const double t = eta * grad_norm;
      return std::max(t * t, 1e-300);
    }();
    for (int k = 0; k < max_cg && rho > cg_tol2; ++k) {
      tmp_n.noalias() = x * cg_p;
      tmp_n.array() += cg_pb;
      tmp_n.array() *= active.array();
      hp_w.noalias() = cg_p + c * (x.transpose() * tmp_n);
      const double hp_b = c * tmp_n.sum();
      const double curvature = cg_p.dot(hp_w) + cg_pb * hp_b;
      if (curvature <= 0.0) break;  // flat direction (empty active set)
      const double alpha = rho / curvature;
      dir_w.noalias() += alpha * cg_p;
      dir_b += alpha * cg_pb;
      cg_r.noalias() -= alpha * hp_w;
      cg_rb -= alpha * hp_b;
      const double rho_next = cg_r.squaredNorm() + cg_rb * cg_rb;
      const double beta = rho_next / rho;
      cg_p = cg_r + beta * cg_p;
      cg_pb = cg_rb + beta * cg_pb;
      rho = rho_next;
    }
    if (dir_w.squaredNorm() + dir_b * dir_b == 0.0) {
      dir_w = -grad_w;  // CG made no progress; fall back to steepest descent
      dir_b = -grad_b;
    }

    // Backtracking Armijo on the Newton direction; the full step is exact
    // once the active set stops changing.
    const double slope = grad_w.dot(dir_w) + grad_b * dir_b;
    double step = 1.0;
    bool accepted = false;
    Vector dir_scores = x * dir_w;
    dir_scores.array() += dir_b;
    for (int bt = 0; bt < 60; ++bt) {
      tmp_n = scores + step * dir_scores;
      const Vector w_try = w + step * dir_w;
      const double obj_try = objective_from_scores(y, tmp_n, w_try, c);
      if (obj_try <= obj + 1e-4 * step * slope) {
        w = w_try;
        b += step * dir_b;
        scores = tmp_n;
        obj = obj_try;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // descent stalled at floating-point resolution
    sol.objective_trace.push_back(obj);
  }

  sol.model.weights = std::move(w);
  sol.model.bias = b;
  sol.n_iterations = iter;
  sol.objective_value = squared_hinge_objective(problem, sol.model);
  return sol;
}

Vector decision_values(const LinearModel& model, const Matrix& design) {
  detail::require(design.cols() == model.weights.size(),
                  "decision_values: design columns and weight length differ");
  const Index n = design.rows();
  const Index p = design.cols();
  Vector out(n);
  for (Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Index k = 0; k < p; ++k) acc += design(i, k) * model.weights[k];
    out[i] = acc + model.bias;
  }
  return out;
}

double squared_hinge_objective(const SvmProblem& problem, const LinearModel& model) {
  detail::require(problem.design.cols() == model.weights.size(),
                  "squared_hinge_objective: dimension mismatch");
  detail::require(problem.targets.size() == problem.design.rows(),
                  "squared_hinge_objective: design rows and target length differ");
  const Vector scores = decision_values(model, problem.design);
  double loss = 0.0;
  for (Index i = 0; i < problem.targets.size(); ++i) {
    const double h = 1.0 - problem.targets.labels[i] * scores[i];
    if (h > 0.0) loss += h * h;
  }
  return 0.5 * model.weights.squaredNorm() + 0.5 * problem.cost_c * loss;
}

}  // namespace fsvm
