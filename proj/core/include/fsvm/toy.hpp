#pragma once

#include "fsvm/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

// Seeded generator for the synthetic sequence-labeling benchmark: labels form
// contiguous constant-label regions whose lengths are uniform on
// [region_len_min, region_len_max] with a fair-coin sign per region; each of
// the first nbrel channels carries the label as a switching mean {-1,+1},
// shifted by its per-channel lag and corrupted by N(0, sigma^2) noise; the
// remaining channels are pure noise.
//
// Draw order (one stream per (seed, stream_role)): region lengths and signs
// first, interleaved per region; then channel noise, channel-major. Channel
// j's mean at sample i is the label at sample i - lag_j, clamped to the first
// sample for i <= lag_j.

namespace fsvm {

struct ToySpec {
  int nbtot = 1;   // total channels
  int nbrel = 1;   // discriminative channels (the first nbrel of them)
  double sigma = 0.0;
  int n_samples = 1000;
  int region_len_min = 30;
  int region_len_max = 40;
  // Per-channel shifts; empty picks the defaults: lags spread evenly over
  // [0, 10] across the discriminative channels, 0 for noise channels.
  std::vector<int> lags;
  std::uint64_t seed = 0;
  std::string stream_role = "train";
};

/// The lags used when ToySpec.lags is empty.
std::vector<int> default_lags(int nbtot, int nbrel);

/// Validates the spec and generates one dataset; bit-identical for equal specs.
std::pair<SignalMatrix, LabelSequence> generate_toy(const ToySpec& spec);

/// Multiclass variant for smoke tests and one-against-all exercises: regions
/// draw a class in 1..K, and discriminative channel j responds with mean +1
/// when the (lagged) label equals 1 + (j mod K) and -1 otherwise.
std::pair<SignalMatrix, LabelSequence> generate_multiclass_toy(const ToySpec& spec,
                                                               int n_classes);

/// A train/valid/test triple sharing one seed, split by stream role.
struct ToyTriple {
  ToySpec train;
  ToySpec valid;
  ToySpec test;
};

/// Triple with the standard experiment sizes: 1000 samples for training and
/// validation, 5000 for test.
ToyTriple make_toy_triple(ToySpec base);

/// Sweep points used by the scripted experiments.
std::vector<double> default_sigma_points();  // {1, 2, 3} at nbtot=30, nbrel=3
std::vector<int> default_nbtot_points();     // {15, 30, 60} at sigma=3, nbrel=3

inline constexpr std::uint64_t kDefaultExperimentSeed = 20240901;

/// One seeded triple per sweep point of the noise sweep (varying sigma).
std::vector<ToyTriple> sigma_sweep_specs(std::uint64_t base_seed = kDefaultExperimentSeed);

/// One seeded triple per sweep point of the dimension sweep (varying nbtot).
std::vector<ToyTriple> dimension_sweep_specs(std::uint64_t base_seed = kDefaultExperimentSeed);

/// Both sweeps concatenated: the full default experiment grid.
std::vector<ToyTriple> default_experiment_specs(std::uint64_t base_seed = kDefaultExperimentSeed);

}  // namespace fsvm
