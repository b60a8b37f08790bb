#include "fsvm/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace fsvm {

namespace {

double wall_seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

LabelSequence binarize(const LabelSequence& y, int positive_class) {
  IntVector out(y.size());
  for (Index i = 0; i < y.size(); ++i)
    out[i] = y.labels[i] == positive_class ? 1 : -1;
  return LabelSequence::binary(std::move(out));
}

}  // namespace

const char* to_string(TrainerKind kind) {
  switch (kind) {
    case TrainerKind::Plain: return "plain";
    case TrainerKind::Avg: return "avg";
    case TrainerKind::Window: return "window";
    case TrainerKind::Filter: return "filter";
  }
  return "unknown";
}

TrainerKind trainer_kind_from_string(const std::string& name) {
  if (name == "plain") return TrainerKind::Plain;
  if (name == "avg") return TrainerKind::Avg;
  if (name == "window") return TrainerKind::Window;
  if (name == "filter") return TrainerKind::Filter;
  throw std::invalid_argument("unknown trainer kind: " + name);
}

BinaryModel train_binary(TrainerKind kind, const SignalMatrix& x, const LabelSequence& y,
                         const Hyperparams& hp) {
  switch (kind) {
    case TrainerKind::Plain:
      return train_plain_svm(x, y, hp.cost_c, hp.inner);
    case TrainerKind::Window:
      return train_window_svm(x, y, hp.window_f, hp.delay_n0, hp.cost_c, hp.inner);
    case TrainerKind::Avg:
      return train_avg_svm(x, y, hp.window_f, hp.delay_n0, hp.cost_c, hp.reg_lambda,
                           hp.inner);
    case TrainerKind::Filter:
      return train_filter_svm(x, y, hp.window_f, hp.delay_n0, hp.cost_c, hp.reg_lambda,
                              hp.stop, hp.inner);
  }
  throw std::invalid_argument("train_binary: unknown trainer kind");
}

OvaModel train_ova(TrainerKind kind, const SignalMatrix& x, const LabelSequence& y,
                   const Hyperparams& hp) {
  detail::require(!y.is_binary(), "train_ova: labels must be multiclass");
  detail::require(y.size() == x.n_samples(), "train_ova: signal and label lengths differ");

  int distinct = 0;
  for (int k = 1; k <= y.n_classes; ++k) {
    for (Index i = 0; i < y.size(); ++i) {
      if (y.labels[i] == k) {
        ++distinct;
        break;
      }
    }
  }
  detail::require(distinct >= 2,
                  "train_ova: need at least two distinct classes in the labels");

  OvaModel model;
  model.kind = kind;
  model.multiclass = true;
  for (int k = 1; k <= y.n_classes; ++k) {
    model.classes.push_back(k);
    try {
      model.members.push_back(train_binary(kind, x, binarize(y, k), hp));
    } catch (const std::exception& e) {
      throw std::runtime_error("train_ova: class " + std::to_string(k) + ": " + e.what());
    }
  }
  return model;
}

SequenceModel train_model(TrainerKind kind, const SignalMatrix& x, const LabelSequence& y,
                          const Hyperparams& hp) {
  if (!y.is_binary()) return train_ova(kind, x, y, hp);
  SequenceModel model;
  model.kind = kind;
  model.multiclass = false;
  model.classes = {1};  // the single member scores the positive class
  model.members.push_back(train_binary(kind, x, y, hp));
  return model;
}

Vector binary_scores(const BinaryModel& model, const SignalMatrix& x) {
  if (const auto* w = std::get_if<WindowModel>(&model)) return predict_window(*w, x).scores;
  return predict_filter(std::get<FilterModel>(model), x).scores;
}

Matrix ova_scores(const OvaModel& model, const SignalMatrix& x) {
  detail::require(model.multiclass && !model.members.empty(),
                  "ova_scores: not a multiclass model");
  Matrix scores(x.n_samples(), static_cast<Index>(model.members.size()));
  for (std::size_t k = 0; k < model.members.size(); ++k)
    scores.col(static_cast<Index>(k)) = binary_scores(model.members[k], x);
  return scores;
}

LabelSequence predict_ova(const OvaModel& model, const SignalMatrix& x) {
  const Matrix scores = ova_scores(model, x);
  IntVector labels(scores.rows());
  for (Index i = 0; i < scores.rows(); ++i) {
    Index best = 0;
    for (Index k = 1; k < scores.cols(); ++k)
      if (scores(i, k) > scores(i, best)) best = k;  // ties keep the lowest class
    labels[i] = model.classes[static_cast<std::size_t>(best)];
  }
  return LabelSequence::multiclass(std::move(labels), static_cast<int>(model.classes.size()));
}

LabelSequence predict_labels(const SequenceModel& model, const SignalMatrix& x) {
  if (model.multiclass) return predict_ova(model, x);
  detail::require(model.members.size() == 1, "predict_labels: malformed binary model");
  const Vector scores = binary_scores(model.members[0], x);
  IntVector labels(scores.size());
  for (Index i = 0; i < scores.size(); ++i) labels[i] = scores[i] < 0.0 ? -1 : 1;
  return LabelSequence::binary(std::move(labels));
}

double error_rate(const LabelSequence& pred, const LabelSequence& truth) {
  detail::require(pred.size() == truth.size(), "error_rate: length mismatch");
  Index wrong = 0;
  for (Index i = 0; i < pred.size(); ++i)
    if (pred.labels[i] != truth.labels[i]) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(pred.size());
}

std::vector<double> GridSpec::default_cost_grid() {
  return {1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
}

std::vector<double> GridSpec::default_lambda_grid() {
  return {1e-2, 1e-1, 1.0, 1e1, 1e2};
}

GridSpec GridSpec::for_kind(TrainerKind kind, int window_f, int delay_n0) {
  GridSpec grid;
  grid.kind = kind;
  if (kind == TrainerKind::Plain) {
    grid.window_f_values = {1};
    grid.delay_n0_values = {0};
  } else {
    grid.window_f_values = {window_f};
    grid.delay_n0_values = {delay_n0};
  }
  return grid;
}

GridSearchResult grid_search(const SignalMatrix& x_train, const LabelSequence& y_train,
                             const SignalMatrix& x_valid, const LabelSequence& y_valid,
                             const GridSpec& grid, int n_jobs) {
  detail::require(!grid.cost_c_values.empty(), "grid_search: empty C candidate list");
  detail::require(!grid.window_f_values.empty(), "grid_search: empty f candidate list");
  detail::require(!grid.delay_n0_values.empty(), "grid_search: empty n0 candidate list");
  for (double c : grid.cost_c_values)
    detail::require(c > 0.0, "grid_search: C candidates must be positive");

  const std::vector<double> lambdas =
      grid.uses_lambda() ? grid.lambda_values : std::vector<double>{1.0};
  detail::require(!lambdas.empty(), "grid_search: empty lambda candidate list");
  for (double l : lambdas)
    detail::require(l > 0.0, "grid_search: lambda candidates must be positive");

  std::vector<Hyperparams> cells;
  for (int f : grid.window_f_values)
    for (int n0 : grid.delay_n0_values)
      for (double c : grid.cost_c_values)
        for (double l : lambdas) {
          Hyperparams hp;
          hp.cost_c = c;
          hp.reg_lambda = l;
          hp.window_f = f;
          hp.delay_n0 = n0;
          hp.stop = grid.stop;
          hp.inner = grid.inner;
          cells.push_back(hp);
        }

  GridSearchResult result;
  result.table.resize(cells.size());
  std::vector<SequenceModel> models(cells.size());

  parallel_for(cells.size(), n_jobs, [&](std::size_t idx) {
    GridCell& cell = result.table[idx];
    cell.hp = cells[idx];
    const auto start = std::chrono::steady_clock::now();
    try {
      models[idx] = train_model(grid.kind, x_train, y_train, cells[idx]);
      cell.validation_error = error_rate(predict_labels(models[idx], x_valid), y_valid);
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.message = e.what();
      cell.validation_error = std::numeric_limits<double>::infinity();
    }
    cell.wall_seconds = wall_seconds_since(start);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.table.size(); ++i)
    if (result.table[i].validation_error < result.table[best].validation_error) best = i;
  if (!result.table[best].ok)
    throw std::runtime_error("grid_search: every cell failed; first error: " +
                             result.table[0].message);

  result.best = result.table[best].hp;
  result.best_index = best;
  result.best_model = std::move(models[best]);
  return result;
}

void parallel_for(std::size_t count, int n_jobs, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (n_jobs <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(n_jobs), count);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

namespace {

struct ExperimentTask {
  std::size_t point_index;
  std::size_t run_index;
  std::size_t method_index;
};

}  // namespace

ExperimentResult run_figure2_experiment(SweepSide side, const ExperimentOptions& options) {
  detail::require(!options.run_seeds.empty(), "experiment: need at least one run seed");
  detail::require(!options.methods.empty(), "experiment: need at least one method");

  // One toy triple spec per sweep point.
  std::vector<ToyTriple> point_specs;
  std::vector<double> sweep_values;
  if (side == SweepSide::Sigma) {
    const std::vector<double> points =
        options.sigma_points.empty() ? default_sigma_points() : options.sigma_points;
    for (std::size_t p = 0; p < points.size(); ++p) {
      ToySpec base;
      base.nbtot = 30;
      base.nbrel = 3;
      base.sigma = points[p];
      base.seed = options.base_seed + 101 * p;
      point_specs.push_back(make_toy_triple(base));
      sweep_values.push_back(points[p]);
    }
  } else {
    const std::vector<int> points =
        options.nbtot_points.empty() ? default_nbtot_points() : options.nbtot_points;
    for (std::size_t p = 0; p < points.size(); ++p) {
      ToySpec base;
      base.nbtot = points[p];
      base.nbrel = 3;
      base.sigma = 3.0;
      base.seed = options.base_seed + 50000 + 101 * p;
      point_specs.push_back(make_toy_triple(base));
      sweep_values.push_back(static_cast<double>(points[p]));
    }
  }

  const std::size_t n_points = point_specs.size();
  const std::size_t n_runs = options.run_seeds.size();
  const std::size_t n_methods = options.methods.size();

  std::vector<ExperimentTask> tasks;
  for (std::size_t p = 0; p < n_points; ++p)
    for (std::size_t r = 0; r < n_runs; ++r)
      for (std::size_t m = 0; m < n_methods; ++m) tasks.push_back({p, r, m});

  struct TaskOutcome {
    double error = 0.0;
    Hyperparams chosen;
    std::string failure;
    double wall_seconds = 0.0;
  };
  std::vector<TaskOutcome> outcomes(tasks.size());

  parallel_for(tasks.size(), options.n_jobs, [&](std::size_t idx) {
    const ExperimentTask& task = tasks[idx];
    TaskOutcome& out = outcomes[idx];
    const auto start = std::chrono::steady_clock::now();
    try {
      ToyTriple triple = point_specs[task.point_index];
      const std::uint64_t run_seed = options.run_seeds[task.run_index];
      triple.train.seed += run_seed;
      triple.valid.seed += run_seed;
      triple.test.seed += run_seed;
      triple.train.n_samples = options.n_train;
      triple.valid.n_samples = options.n_valid;
      triple.test.n_samples = options.n_test;

      const auto [x_train, y_train] = generate_toy(triple.train);
      const auto [x_valid, y_valid] = generate_toy(triple.valid);
      const auto [x_test, y_test] = generate_toy(triple.test);

      GridSpec grid = GridSpec::for_kind(options.methods[task.method_index],
                                         options.window_f, options.delay_n0);
      grid.cost_c_values = options.cost_c_values;
      grid.lambda_values = options.lambda_values;
      grid.stop = options.stop;
      grid.inner = options.inner;

      GridSearchResult best =
          grid_search(x_train, y_train, x_valid, y_valid, grid, /*n_jobs=*/1);
      out.error = error_rate(predict_labels(best.best_model, x_test), y_test);
      out.chosen = best.best;
    } catch (const std::exception& e) {
      out.failure = e.what();
    }
    out.wall_seconds = wall_seconds_since(start);
  });

  ExperimentResult result;
  result.side = side;
  result.run_seeds = options.run_seeds;
  for (std::size_t p = 0; p < n_points; ++p) {
    for (std::size_t m = 0; m < n_methods; ++m) {
      MethodCurvePoint point;
      point.sweep_value = sweep_values[p];
      point.method = options.methods[m];
      for (std::size_t r = 0; r < n_runs; ++r) {
        const TaskOutcome& out = outcomes[(p * n_runs + r) * n_methods + m];
        point.failures.push_back(out.failure);
        point.wall_seconds += out.wall_seconds;
        if (out.failure.empty()) {
          point.test_errors.push_back(out.error);
          point.chosen.push_back(out.chosen);
        }
      }
      point.n_seeds = static_cast<int>(point.test_errors.size());
      if (point.n_seeds > 0) {
        double sum = 0.0;
        for (double e : point.test_errors) sum += e;
        point.mean_error = sum / point.n_seeds;
        double ss = 0.0;
        for (double e : point.test_errors) ss += (e - point.mean_error) * (e - point.mean_error);
        point.std_error = point.n_seeds > 1 ? std::sqrt(ss / (point.n_seeds - 1)) : 0.0;
      }
      result.points.push_back(std::move(point));
    }
  }
  return result;
}

}  // namespace fsvm
