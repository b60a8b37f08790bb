#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

// Core data types for multichannel signal sequence labeling.
//
// Convention used throughout: sample indices are written 1-based (i = 1..N)
// in format and algorithm documentation, and stored 0-based in memory, so
// documented sample i lives in row i-1 of the underlying matrix. All
// function signatures take 0-based indices.

namespace fsvm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using Index = Eigen::Index;

/// Multichannel signal: rows are samples in time order, columns are channels.
/// Entries must be finite; N >= 1 and d >= 1.
struct SignalMatrix {
  Matrix data;

  SignalMatrix() = default;
  explicit SignalMatrix(Matrix values);

  Index n_samples() const { return data.rows(); }
  Index n_channels() const { return data.cols(); }
};

enum class LabelArity { Binary, Multiclass };

/// Per-sample labels. Binary labels live in {-1,+1}; multiclass labels in
/// {1..K} with K >= 2.
struct LabelSequence {
  IntVector labels;
  LabelArity arity = LabelArity::Binary;
  int n_classes = 2;

  static LabelSequence binary(IntVector values);
  static LabelSequence multiclass(IntVector values, int k);

  Index size() const { return labels.size(); }
  bool is_binary() const { return arity == LabelArity::Binary; }
};

/// Per-channel FIR taps plus a shared delay. coeffs is f x d: column j is the
/// filter of channel j. Tap m (0-based) applies to sample i - m + delay_n0 of
/// the input when producing output sample i; indices outside [0, N) read as
/// zero. delay_n0 = 0 is a causal filter, delay_n0 = f/2 is centered.
struct FilterBank {
  Matrix coeffs;
  int delay_n0 = 0;

  FilterBank() = default;
  FilterBank(Matrix taps, int n0);

  Index n_taps() const { return coeffs.rows(); }
  Index n_channels() const { return coeffs.cols(); }

  /// All taps equal to 1/f: a moving-average filter per channel.
  static FilterBank uniform(Index f, Index d, int n0);
};

/// Linear decision function x -> weights . x + bias.
struct LinearModel {
  Vector weights;
  double bias = 0.0;
};

/// Scores plus the thresholded labels for a binary decision function.
struct Prediction {
  Vector scores;
  LabelSequence labels;
};

namespace detail {
void require(bool condition, const std::string& message);
void require_finite(const Matrix& m, const std::string& what);
void require_finite(const Vector& v, const std::string& what);
}  // namespace detail

}  // namespace fsvm
