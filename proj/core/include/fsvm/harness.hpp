#pragma once

#include "fsvm/filter_svm.hpp"
#include "fsvm/toy.hpp"
#include "fsvm/types.hpp"
#include "fsvm/window_svm.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

// Multiclass wrapping, evaluation, grid-search validation, and the scripted
// sweep experiments. Everything here is deterministic: concurrent work items
// write into slots keyed by their identity, so results do not depend on
// scheduling or the number of jobs.

namespace fsvm {

enum class TrainerKind { Plain, Avg, Window, Filter };

const char* to_string(TrainerKind kind);
TrainerKind trainer_kind_from_string(const std::string& name);

/// Hyperparameters for any trainer kind; fields a kind does not use are
/// ignored (lambda for plain/avg/window, f and n0 for plain).
struct Hyperparams {
  double cost_c = 1.0;
  double reg_lambda = 1.0;
  int window_f = 1;
  int delay_n0 = 0;
  StoppingRule stop{};
  SvmSolverOptions inner{};
};

using BinaryModel = std::variant<WindowModel, FilterModel>;

/// A trained labeler: one binary member, or K one-against-all members.
struct SequenceModel {
  TrainerKind kind = TrainerKind::Plain;
  bool multiclass = false;
  std::vector<int> classes;          // {-1,+1} or {1..K}
  std::vector<BinaryModel> members;  // one, or one per class
};

/// One-against-all multiclass model (K members, classes 1..K).
using OvaModel = SequenceModel;

BinaryModel train_binary(TrainerKind kind, const SignalMatrix& x, const LabelSequence& y,
                         const Hyperparams& hp);

/// Trains one binary model per class k on labels (+1 if y = k else -1).
/// Throws if fewer than two distinct labels are present; per-class trainer
/// failures are rethrown with the class attached.
OvaModel train_ova(TrainerKind kind, const SignalMatrix& x, const LabelSequence& y,
                   const Hyperparams& hp);

/// Binary or one-against-all, depending on the label arity.
SequenceModel train_model(TrainerKind kind, const SignalMatrix& x, const LabelSequence& y,
                          const Hyperparams& hp);

Vector binary_scores(const BinaryModel& model, const SignalMatrix& x);

/// N x K matrix of per-class scores.
Matrix ova_scores(const OvaModel& model, const SignalMatrix& x);

/// argmax over class scores; ties go to the lowest class index.
LabelSequence predict_ova(const OvaModel& model, const SignalMatrix& x);

/// Labels from any SequenceModel (sign for binary, argmax for multiclass).
LabelSequence predict_labels(const SequenceModel& model, const SignalMatrix& x);

/// Fraction of samples where pred differs from truth.
double error_rate(const LabelSequence& pred, const LabelSequence& truth);

/// Grid of hyperparameter candidates. Cells are visited f, then n0, then C,
/// then lambda, each list in the order given; validation ties keep the first
/// cell visited. Kinds that ignore lambda visit a single nominal lambda.
struct GridSpec {
  TrainerKind kind = TrainerKind::Plain;
  std::vector<double> cost_c_values = default_cost_grid();
  std::vector<double> lambda_values = default_lambda_grid();
  std::vector<int> window_f_values = {1};
  std::vector<int> delay_n0_values = {0};
  StoppingRule stop{};
  SvmSolverOptions inner{};

  static std::vector<double> default_cost_grid();    // 1e-2 .. 1e3, log-spaced
  static std::vector<double> default_lambda_grid();  // 1e-2 .. 1e2, log-spaced
  /// Grid with the default C (and lambda, for filter) candidates at fixed f, n0.
  static GridSpec for_kind(TrainerKind kind, int window_f, int delay_n0);

  bool uses_lambda() const { return kind == TrainerKind::Filter; }
};

struct GridCell {
  Hyperparams hp;
  double validation_error = std::numeric_limits<double>::infinity();
  bool ok = false;
  std::string message;  // failure description when !ok
  double wall_seconds = 0.0;
};

struct GridSearchResult {
  Hyperparams best;
  std::size_t best_index = 0;
  std::vector<GridCell> table;
  SequenceModel best_model;  // trained on the training split with `best`
};

/// Trains one model per cell on the training split (cells run concurrently
/// across n_jobs) and scores it on the validation split. Per-cell failures
/// score infinity and never abort the sweep; an all-failed grid throws.
GridSearchResult grid_search(const SignalMatrix& x_train, const LabelSequence& y_train,
                             const SignalMatrix& x_valid, const LabelSequence& y_valid,
                             const GridSpec& grid, int n_jobs = 1);

enum class SweepSide { Sigma, Dimension };

struct ExperimentOptions {
  std::uint64_t base_seed = kDefaultExperimentSeed;
  std::vector<std::uint64_t> run_seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int window_f = 21;
  int delay_n0 = 11;
  std::vector<TrainerKind> methods = {TrainerKind::Plain, TrainerKind::Avg,
                                      TrainerKind::Window, TrainerKind::Filter};
  std::vector<double> cost_c_values = GridSpec::default_cost_grid();
  std::vector<double> lambda_values = GridSpec::default_lambda_grid();
  StoppingRule stop{};
  SvmSolverOptions inner{};
  // Sweep points; empty keeps the defaults for the chosen side.
  std::vector<double> sigma_points;
  std::vector<int> nbtot_points;
  // Dataset sizes per run.
  int n_train = 1000;
  int n_valid = 1000;
  int n_test = 5000;
  int n_jobs = 1;
};

struct MethodCurvePoint {
  double sweep_value = 0.0;  // sigma or nbtot
  TrainerKind method = TrainerKind::Plain;
  std::vector<double> test_errors;       // one per run, in run order
  std::vector<Hyperparams> chosen;       // validated hyperparameters per run
  std::vector<std::string> failures;     // non-empty entries mark failed runs
  double mean_error = 0.0;
  double std_error = 0.0;  // sample standard deviation over runs
  int n_seeds = 0;
  double wall_seconds = 0.0;
};

struct ExperimentResult {
  SweepSide side = SweepSide::Sigma;
  std::vector<std::uint64_t> run_seeds;
  std::vector<MethodCurvePoint> points;  // ordered by sweep point, then method
};

/// For every sweep point and run seed: generate the toy triple, grid-search
/// each method on train/valid, and record its test error. Failed runs are
/// recorded, never fatal.
ExperimentResult run_figure2_experiment(SweepSide side, const ExperimentOptions& options = {});

/// Runs `fn(i)` for i in [0, count) over n_jobs worker threads (serial when
/// n_jobs <= 1). fn must confine its writes to slot i of shared outputs.
void parallel_for(std::size_t count, int n_jobs, const std::function<void(std::size_t)>& fn);

}  // namespace fsvm
