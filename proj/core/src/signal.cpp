#include "fsvm/signal.hpp"

#include <algorithm>

namespace fsvm {

SignalMatrix filter_apply(const SignalMatrix& x, const FilterBank& fb) {
  detail::require(fb.n_channels() == x.n_channels(),
                  "filter_apply: filter bank and signal channel counts differ");
  detail::require_finite(fb.coeffs, "filter_apply: filter coefficients");

  const Index n = x.n_samples();
  const Index d = x.n_channels();
  const Index f = fb.n_taps();

  SignalMatrix out;
  out.data = Matrix::Zero(n, d);
  for (Index j = 0; j < d; ++j) {
    for (Index m = 0; m < f; ++m) {
      const double c = fb.coeffs(m, j);
      if (c == 0.0) continue;
      // out(i, j) += c * x(i + k, j) with k the source offset of tap m.
      const Index k = fb.delay_n0 - m;
      if (k >= 0) {
        const Index len = n - k;
        if (len > 0)
          out.data.col(j).head(len) += c * x.data.col(j).tail(len);
      } else {
        const Index len = n + k;
        if (len > 0)
          out.data.col(j).tail(len) += c * x.data.col(j).head(len);
      }
    }
  }
  return out;
}

Matrix window_at(const SignalMatrix& x, Index sample_index, Index f, int n0) {
  detail::require(sample_index >= 0 && sample_index < x.n_samples(),
                  "window_at: sample index out of bounds");
  detail::require(f >= 1, "window_at: window length must be >= 1");

  const Index n = x.n_samples();
  const Index d = x.n_channels();
  Matrix w = Matrix::Zero(f, d);
  for (Index m = 0; m < f; ++m) {
    const Index src = sample_index - m + n0;
    if (src >= 0 && src < n) w.row(m) = x.data.row(src);
  }
  return w;
}

Matrix vectorize_windows(const SignalMatrix& x, Index f, int n0) {
  detail::require(f >= 1, "vectorize_windows: window length must be >= 1");

  const Index n = x.n_samples();
  const Index d = x.n_channels();
  Matrix z = Matrix::Zero(n, f * d);
  for (Index m = 0; m < f; ++m) {
    const Index k = n0 - m;
    const Index dst_lo = std::max<Index>(0, -k);
    const Index src_lo = dst_lo + k;
    const Index len = std::min(n - dst_lo, n - src_lo);
    if (len <= 0) continue;
    z.block(dst_lo, m * d, len, d) = x.data.block(src_lo, 0, len, d);
  }
  return z;
}

}  // namespace fsvm
