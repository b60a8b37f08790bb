#include "fsvm/types.hpp"

#include <stdexcept>
#include <utility>

namespace fsvm {

namespace detail {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

void require_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) throw std::invalid_argument(what + ": non-finite entries");
}

void require_finite(const Vector& v, const std::string& what) {
  if (!v.allFinite()) throw std::invalid_argument(what + ": non-finite entries");
}

}  // namespace detail

SignalMatrix::SignalMatrix(Matrix values) : data(std::move(values)) {
  detail::require(data.rows() >= 1, "SignalMatrix: need at least one sample");
  detail::require(data.cols() >= 1, "SignalMatrix: need at least one channel");
  detail::require_finite(data, "SignalMatrix");
}

LabelSequence LabelSequence::binary(IntVector values) {
  detail::require(values.size() >= 1, "LabelSequence: empty label vector");
  for (Index i = 0; i < values.size(); ++i) {
    detail::require(values[i] == -1 || values[i] == 1,
                    "LabelSequence: binary labels must be -1 or +1");
  }
  LabelSequence out;
  out.labels = std::move(values);
  out.arity = LabelArity::Binary;
  out.n_classes = 2;
  return out;
}

LabelSequence LabelSequence::multiclass(IntVector values, int k) {
  detail::require(k >= 2, "LabelSequence: multiclass needs K >= 2");
  detail::require(values.size() >= 1, "LabelSequence: empty label vector");
  for (Index i = 0; i < values.size(); ++i) {
    detail::require(values[i] >= 1 && values[i] <= k,
                    "LabelSequence: multiclass labels must lie in 1..K");
  }
  LabelSequence out;
  out.labels = std::move(values);
  out.arity = LabelArity::Multiclass;
  out.n_classes = k;
  return out;
}

FilterBank::FilterBank(Matrix taps, int n0) : coeffs(std::move(taps)), delay_n0(n0) {
  detail::require(coeffs.rows() >= 1, "FilterBank: need at least one tap");
  detail::require(coeffs.cols() >= 1, "FilterBank: need at least one channel");
  detail::require(delay_n0 >= 0, "FilterBank: delay must be >= 0");
  detail::require(delay_n0 <= coeffs.rows(), "FilterBank: delay must be <= tap count");
  detail::require_finite(coeffs, "FilterBank");
}

FilterBank FilterBank::uniform(Index f, Index d, int n0) {
  detail::require(f >= 1 && d >= 1, "FilterBank::uniform: need f >= 1 and d >= 1");
  return FilterBank(Matrix::Constant(f, d, 1.0 / static_cast<double>(f)), n0);
}

}  // namespace fsvm
