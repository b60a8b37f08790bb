#include "fsvm/toy.hpp"

#include "fsvm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsvm {

namespace {

void validate_spec(const ToySpec& spec) {
  detail::require(spec.nbtot >= 1, "ToySpec: nbtot must be >= 1");
  detail::require(spec.nbrel >= 0 && spec.nbrel <= spec.nbtot,
                  "ToySpec: need 0 <= nbrel <= nbtot");
  detail::require(spec.sigma >= 0.0, "ToySpec: sigma must be >= 0");
  detail::require(spec.n_samples >= 1, "ToySpec: n_samples must be >= 1");
  detail::require(spec.region_len_min >= 1, "ToySpec: region_len_min must be >= 1");
  detail::require(spec.region_len_min <= spec.region_len_max,
                  "ToySpec: region_len_min must be <= region_len_max");
  detail::require(spec.lags.empty() || spec.lags.size() == static_cast<size_t>(spec.nbtot),
                  "ToySpec: lags must be empty or one per channel");
  for (int lag : spec.lags)
    detail::require(lag >= 0, "ToySpec: lags must be >= 0");
}

// Shared generation: draw_region_label produces the per-region class and
// channel_mean maps the (lagged) label to the channel's mean level.
template <typename DrawRegionLabel, typename ChannelMean>
std::pair<SignalMatrix, IntVector> generate(const ToySpec& spec,
                                            DrawRegionLabel&& draw_region_label,
                                            ChannelMean&& channel_mean) {
  validate_spec(spec);
  const int n = spec.n_samples;
  const int d = spec.nbtot;
  const std::vector<int> lags =
      spec.lags.empty() ? default_lags(spec.nbtot, spec.nbrel) : spec.lags;

  Rng rng(spec.seed, spec.stream_role);

  IntVector labels(n);
  int filled = 0;
  while (filled < n) {
    const int len = rng.uniform_int(spec.region_len_min, spec.region_len_max);
    const int label = draw_region_label(rng);
    const int stop = std::min(n, filled + len);  // final region may be truncated
    for (int i = filled; i < stop; ++i) labels[i] = label;
    filled = stop;
  }

  Matrix x(n, d);
  for (int j = 0; j < d; ++j) {
    const bool discriminative = j < spec.nbrel;
    const int lag = lags[static_cast<size_t>(j)];
    for (int i = 0; i < n; ++i) {
      double mean = 0.0;
      if (discriminative) {
        const int src = std::max(0, i - lag);
        mean = channel_mean(j, labels[src]);
      }
      x(i, j) = spec.sigma > 0.0 ? rng.normal(mean, spec.sigma) : mean;
    }
  }
  return {SignalMatrix(std::move(x)), std::move(labels)};
}

}  // namespace

std::vector<int> default_lags(int nbtot, int nbrel) {
  std::vector<int> lags(static_cast<size_t>(nbtot), 0);
  for (int r = 0; r < nbrel; ++r) {
    lags[static_cast<size_t>(r)] =
        nbrel > 1 ? static_cast<int>(std::lround(10.0 * r / (nbrel - 1))) : 0;
  }
  return lags;
}

std::pair<SignalMatrix, LabelSequence> generate_toy(const ToySpec& spec) {
  auto [x, labels] = generate(
      spec, [](Rng& rng) { return rng.uniform_int(0, 1) == 0 ? -1 : 1; },
      [](int /*channel*/, int label) { return static_cast<double>(label); });
  return {std::move(x), LabelSequence::binary(std::move(labels))};
}

std::pair<SignalMatrix, LabelSequence> generate_multiclass_toy(const ToySpec& spec,
                                                               int n_classes) {
  detail::require(n_classes >= 2, "generate_multiclass_toy: need K >= 2");
  auto [x, labels] = generate(
      spec, [n_classes](Rng& rng) { return rng.uniform_int(1, n_classes); },
      [n_classes](int channel, int label) {
        return label == 1 + (channel % n_classes) ? 1.0 : -1.0;
      });
  return {std::move(x), LabelSequence::multiclass(std::move(labels), n_classes)};
}

ToyTriple make_toy_triple(ToySpec base) {
  ToyTriple triple;
  base.n_samples = 1000;
  base.stream_role = "train";
  triple.train = base;
  base.stream_role = "valid";
  triple.valid = base;
  base.n_samples = 5000;
  base.stream_role = "test";
  triple.test = base;
  return triple;
}

std::vector<double> default_sigma_points() { return {1.0, 2.0, 3.0}; }

std::vector<int> default_nbtot_points() { return {15, 30, 60}; }

std::vector<ToyTriple> sigma_sweep_specs(std::uint64_t base_seed) {
  std::vector<ToyTriple> out;
  const auto points = default_sigma_points();
  for (size_t p = 0; p < points.size(); ++p) {
    ToySpec base;
    base.nbtot = 30;
    base.nbrel = 3;
    base.sigma = points[p];
    base.seed = base_seed + 101 * p;
    out.push_back(make_toy_triple(base));
  }
  return out;
}

std::vector<ToyTriple> dimension_sweep_specs(std::uint64_t base_seed) {
  std::vector<ToyTriple> out;
  const auto points = default_nbtot_points();
  for (size_t p = 0; p < points.size(); ++p) {
    ToySpec base;
    base.nbtot = points[p];
    base.nbrel = 3;
    base.sigma = 3.0;
    base.seed = base_seed + 50000 + 101 * p;
    out.push_back(make_toy_triple(base));
  }
  return out;
}

std::vector<ToyTriple> default_experiment_specs(std::uint64_t base_seed) {
  std::vector<ToyTriple> out = sigma_sweep_specs(base_seed);
  const std::vector<ToyTriple> dims = dimension_sweep_specs(base_seed);
  out.insert(out.end(), dims.begin(), dims.end());
  return out;
}

}  // namespace fsvm
