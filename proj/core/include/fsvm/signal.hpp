#pragma once

#include "fsvm/types.hpp"

// Filtering and windowing primitives shared by all trainers.
//
// The filtered signal is, in 1-based sample indices,
//
//   out(i, j) = sum_{m=1..f} coeffs(m, j) * x(i + 1 - m + n0, j)
//
// i.e. a unidimensional convolution of each channel with the corresponding
// column of the filter bank, advanced by the delay n0. Samples referenced
// outside [1, N] contribute zero (zero-padding); this keeps the map linear in
// x and makes training gradients exact at the sequence edges.
//
// All operations are pure functions over read-only inputs and safe to call
// concurrently on shared matrices.

namespace fsvm {

/// Applies the filter bank to every channel, returning a fresh matrix of the
/// same shape. Throws on channel-count mismatch or non-finite taps.
SignalMatrix filter_apply(const SignalMatrix& x, const FilterBank& fb);

/// The f x d block of samples feeding output sample `sample_index` (0-based):
/// entry (m, j) = x(sample_index - m + n0, j), zero where out of range.
Matrix window_at(const SignalMatrix& x, Index sample_index, Index f, int n0);

/// Stacks every sample's window into a row: row i is window_at(x, i, f, n0)
/// flattened tap-major, entry (m, j) landing in column m*d + j. The inner
/// product of row i with a tap-major flattened weight matrix W reproduces the
/// windowed decision sum for sample i.
Matrix vectorize_windows(const SignalMatrix& x, Index f, int n0);

}  // namespace fsvm
