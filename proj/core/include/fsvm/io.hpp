#pragma once

#include "fsvm/harness.hpp"
#include "fsvm/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

// File formats.
//
// Signal CSV: header "t,ch1,...,chd[,label]", then one row per sample in
// time order with t = 1..N, channel values in decimal notation, and an
// integer label column when present (required for training files). Values
// are written with 17 significant digits so a write/read round trip is
// bit-exact. The same layout ingests externally featurized data (e.g. 96
// feature columns + label).
//
// Model file: a versioned flat text format; a key-value header per member
// followed by a row-major f x d coefficient block, identical in layout for
// window and filter models.
//
// Key-value files (configs, manifests, dataset metadata): one "key = value"
// or "key value"-style line each ("key=value" on write), '#' comments and
// blank lines ignored.

namespace fsvm {

/// Doubles formatted with max_digits10 so parsing returns the same bits.
std::string format_double(double value);

struct SignalData {
  SignalMatrix x;
  std::optional<LabelSequence> y;
};

/// Parse errors carry the 1-based line number of the offending row.
SignalData read_signal_csv(const std::string& path);
void write_signal_csv(const std::string& path, const SignalMatrix& x,
                      const LabelSequence* y = nullptr);

inline constexpr int kModelFormatVersion = 1;

void save_model(const std::string& path, const SequenceModel& model);
SequenceModel load_model(const std::string& path);

/// The f x d space-time map of a trained member: the weight matrix W for
/// window models, the channel-weighted filter w_j * F(m,j) for filter models.
Matrix member_map(const BinaryModel& member);

/// Writes a matrix as CSV with a ch1..chd header row.
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(const std::string& path);

using KeyValueList = std::vector<std::pair<std::string, std::string>>;

void write_key_value(const std::string& path, const KeyValueList& entries);
KeyValueList read_key_value(const std::string& path);

/// Experiment curves: one row per sweep point x method with mean error,
/// standard deviation, and the number of contributing seeds.
void write_experiment_csv(const std::string& path, const ExperimentResult& result);

}  // namespace fsvm
