#pragma once

#include "fsvm/svm.hpp"
#include "fsvm/types.hpp"

// Windowed SVM: a linear SVM over vectorized f x d sample windows, so the
// weight matrix W acts as filter and classifier at once. The decision value
// for sample i (1-based) is
//
//   sum_{m=1..f} sum_{j=1..d} W(m,j) * x(i + 1 - m + n0, j) + bias
//
// with zero-padding at the sequence edges. Training minimizes
// 1/2 ||W||_F^2 + C/2 sum_i max(0, 1 - y_i score_i)^2.

namespace fsvm {

struct WindowModel {
  Matrix weights;  // f x d
  double bias = 0.0;
  int window_f = 1;
  int delay_n0 = 0;
  double cost_c = 1.0;
  bool converged = true;  // inner solver flag

  Index n_channels() const { return weights.cols(); }
};

/// Vectorizes the windows, trains the linear SVM, and reshapes the flat
/// weights back to f x d (tap-major order, matching vectorize_windows).
WindowModel train_window_svm(const SignalMatrix& x, const LabelSequence& y, Index f,
                             int n0, double cost_c, const SvmSolverOptions& options = {});

/// Plain linear SVM on the raw samples; equivalent to a window of size one
/// with zero delay.
WindowModel train_plain_svm(const SignalMatrix& x, const LabelSequence& y, double cost_c,
                            const SvmSolverOptions& options = {});

/// Scores every sample and thresholds at zero; sign(0) maps to +1.
Prediction predict_window(const WindowModel& model, const SignalMatrix& x);

/// W flattened tap-major, the layout decision_values expects.
Vector flatten_weights(const Matrix& w);

}  // namespace fsvm
