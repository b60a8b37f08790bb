#include "fsvm/window_svm.hpp"

#include "fsvm/signal.hpp"

namespace fsvm {

Vector flatten_weights(const Matrix& w) {
  const Index f = w.rows();
  const Index d = w.cols();
  Vector flat(f * d);
  for (Index m = 0; m < f; ++m)
    for (Index j = 0; j < d; ++j) flat[m * d + j] = w(m, j);
  return flat;
}

namespace {

Matrix unflatten_weights(const Vector& flat, Index f, Index d) {
  Matrix w(f, d);
  for (Index m = 0; m < f; ++m)
    for (Index j = 0; j < d; ++j) w(m, j) = flat[m * d + j];
  return w;
}

}  // namespace

WindowModel train_window_svm(const SignalMatrix& x, const LabelSequence& y, Index f,
                             int n0, double cost_c, const SvmSolverOptions& options) {
  detail::require(y.is_binary(), "train_window_svm: labels must be binary");
  detail::require(f >= 1, "train_window_svm: window length must be >= 1");
  detail::require(n0 >= 0 && n0 <= f, "train_window_svm: delay must lie in [0, f]");

  SvmProblem problem{vectorize_windows(x, f, n0), y, cost_c};
  const SvmSolution sol = train_l2svm(problem, options);

  WindowModel model;
  model.weights = unflatten_weights(sol.model.weights, f, x.n_channels());
  model.bias = sol.model.bias;
  model.window_f = static_cast<int>(f);
  model.delay_n0 = n0;
  model.cost_c = cost_c;
  model.converged = sol.converged;
  return model;
}

WindowModel train_plain_svm(const SignalMatrix& x, const LabelSequence& y, double cost_c,
                            const SvmSolverOptions& options) {
  detail::require(y.is_binary(), "train_plain_svm: labels must be binary");
  SvmProblem problem{x.data, y, cost_c};
  const SvmSolution sol = train_l2svm(problem, options);

  WindowModel model;
  model.weights = sol.model.weights.transpose();  // 1 x d
  model.bias = sol.model.bias;
  model.window_f = 1;
  model.delay_n0 = 0;
  model.cost_c = cost_c;
  model.converged = sol.converged;
  return model;
}

Prediction predict_window(const WindowModel& model, const SignalMatrix& x) {
  detail::require(model.n_channels() == x.n_channels(),
                  "predict_window: channel counts differ");
  const Index n = x.n_samples();
  const Index f = model.weights.rows();
  const Index d = model.weights.cols();

  // Accumulate each window in the exact tap-major order used by
  // vectorize_windows + decision_values so the two routes agree bit for bit.
  Prediction out;
  out.scores.resize(n);
  IntVector labels(n);
  for (Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Index m = 0; m < f; ++m) {
      const Index src = i - m + model.delay_n0;
      const bool in_range = src >= 0 && src < n;
      for (Index j = 0; j < d; ++j) {
        const double v = in_range ? x.data(src, j) : 0.0;
        acc += v * model.weights(m, j);
      }
    }
    out.scores[i] = acc + model.bias;
    labels[i] = out.scores[i] < 0.0 ? -1 : 1;
  }
  out.labels = LabelSequence::binary(std::move(labels));
  return out;
}

}  // namespace fsvm
