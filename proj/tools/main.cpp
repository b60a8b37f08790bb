// Command-line front end: data generation, training, prediction, evaluation,
// filter-map export, and scripted experiments. All diagnostics go to stderr;
// data goes to files or stdout; exit code 0 means the command completed.

#include "fsvm/filter_svm.hpp"
#include "fsvm/harness.hpp"
#include "fsvm/io.hpp"
#include "fsvm/rng.hpp"
#include "fsvm/signal.hpp"
#include "fsvm/toy.hpp"
#include "fsvm/version.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace fsvm;

namespace {

int default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Applies a flat key=value config file to a subcommand's options. Keys match
// long option names without the dashes; values given on the command line win.
void apply_config(CLI::App& cmd, const std::string& path) {
  if (path.empty()) return;
  for (const auto& [key, value] : read_key_value(path)) {
    CLI::Option* opt = cmd.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config")
      throw std::runtime_error(path + ": unknown config key '" + key + "'");
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

void require_value(const std::string& value, const std::string& what) {
  if (value.empty())
    throw std::runtime_error(what + " is required (flag or config file)");
}

std::string join_doubles(const std::vector<double>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out << ',';
    out << format_double(values[i]);
  }
  return out.str();
}

template <typename T>
std::string join_ints(const std::vector<T>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out << ',';
    out << values[i];
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// toygen

struct ToygenOptions {
  ToySpec spec;
  int n_train = 1000;
  int n_valid = 1000;
  int n_test = 5000;
  int multiclass_k = 0;  // 0 = binary
  std::string out_dir;
};

void run_toygen(const ToygenOptions& opt) {
  fs::create_directories(opt.out_dir);

  const std::vector<std::pair<std::string, int>> splits = {
      {"train", opt.n_train}, {"valid", opt.n_valid}, {"test", opt.n_test}};

  KeyValueList meta;
  meta.emplace_back("command", "toygen");
  meta.emplace_back("version", kVersion);
  meta.emplace_back("generator", rng_identity());
  meta.emplace_back("nbtot", std::to_string(opt.spec.nbtot));
  meta.emplace_back("nbrel", std::to_string(opt.spec.nbrel));
  meta.emplace_back("sigma", format_double(opt.spec.sigma));
  meta.emplace_back("region_len_min", std::to_string(opt.spec.region_len_min));
  meta.emplace_back("region_len_max", std::to_string(opt.spec.region_len_max));
  const std::vector<int> lags =
      opt.spec.lags.empty() ? default_lags(opt.spec.nbtot, opt.spec.nbrel) : opt.spec.lags;
  meta.emplace_back("lags", join_ints(lags));
  meta.emplace_back("seed", std::to_string(opt.spec.seed));
  meta.emplace_back("classes", opt.multiclass_k >= 2 ? std::to_string(opt.multiclass_k)
                                                     : std::string("binary"));

  for (const auto& [role, n] : splits) {
    ToySpec spec = opt.spec;
    spec.n_samples = n;
    spec.stream_role = role;
    const std::string path = (fs::path(opt.out_dir) / (role + ".csv")).string();
    if (opt.multiclass_k >= 2) {
      const auto [x, y] = generate_multiclass_toy(spec, opt.multiclass_k);
      write_signal_csv(path, x, &y);
    } else {
      const auto [x, y] = generate_toy(spec);
      write_signal_csv(path, x, &y);
    }
    meta.emplace_back(role + "_file", role + ".csv");
    meta.emplace_back(role + "_samples", std::to_string(n));
  }
  write_key_value((fs::path(opt.out_dir) / "metadata.txt").string(), meta);
  std::cerr << "wrote train/valid/test CSVs and metadata.txt to " << opt.out_dir << "\n";
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
  std::string method;
  std::string data_path;
  std::string valid_path;
  std::string model_out;
  std::string grid = "none";  // none | default
  double cost_c = 1.0;
  double reg_lambda = 1.0;
  int window_f = 1;
  int delay_n0 = 0;
  std::vector<double> grid_c;       // optional override of the C candidates
  std::vector<double> grid_lambda;  // optional override of the lambda candidates
  double svm_tol = 1e-8;
  int svm_max_iter = 200;
  int max_outer = 100;
  double rel_obj_tol = 1e-4;
  double filter_change_tol = 1e-5;
  int jobs = default_jobs();
};

void append_member_trace(std::ostream& out, int class_label, const BinaryModel& member) {
  if (const auto* fm = std::get_if<FilterModel>(&member)) {
    for (std::size_t it = 0; it < fm->trace.objectives.size(); ++it) {
      out << class_label << ',' << it << ',' << format_double(fm->trace.objectives[it])
          << ',';
      if (it > 0) out << format_double(fm->trace.step_sizes[it - 1]);
      out << "\n";
    }
  }
}

bool model_converged(const SequenceModel& model) {
  for (const auto& member : model.members) {
    if (const auto* w = std::get_if<WindowModel>(&member)) {
      if (!w->converged) return false;
    } else if (!std::get<FilterModel>(member).trace.inner_all_converged) {
      return false;
    }
  }
  return true;
}

void run_train(const TrainOptions& opt) {
  const TrainerKind kind = trainer_kind_from_string(opt.method);
  const SignalData data = read_signal_csv(opt.data_path);
  if (!data.y) throw std::runtime_error(opt.data_path + ": training data needs a label column");

  Hyperparams hp;
  hp.cost_c = opt.cost_c;
  hp.reg_lambda = opt.reg_lambda;
  hp.window_f = opt.window_f;
  hp.delay_n0 = opt.delay_n0;
  hp.inner.tol = opt.svm_tol;
  hp.inner.max_iter = opt.svm_max_iter;
  hp.stop.max_outer_iter = opt.max_outer;
  hp.stop.rel_obj_tol = opt.rel_obj_tol;
  hp.stop.filter_change_tol = opt.filter_change_tol;

  KeyValueList manifest;
  manifest.emplace_back("command", "train");
  manifest.emplace_back("version", kVersion);
  manifest.emplace_back("method", opt.method);
  manifest.emplace_back("data", opt.data_path);
  manifest.emplace_back("grid", opt.grid);

  SequenceModel model;
  if (opt.grid == "default") {
    if (opt.valid_path.empty())
      throw std::runtime_error("train: --grid default requires --valid");
    const SignalData valid = read_signal_csv(opt.valid_path);
    if (!valid.y) throw std::runtime_error(opt.valid_path + ": validation data needs a label column");

    GridSpec grid = GridSpec::for_kind(kind, opt.window_f, opt.delay_n0);
    if (!opt.grid_c.empty()) grid.cost_c_values = opt.grid_c;
    if (!opt.grid_lambda.empty()) grid.lambda_values = opt.grid_lambda;
    grid.stop = hp.stop;
    grid.inner = hp.inner;

    const GridSearchResult result =
        grid_search(data.x, *data.y, valid.x, *valid.y, grid, opt.jobs);
    model = result.best_model;
    hp = result.best;

    std::ofstream table(opt.model_out + ".grid.csv");
    table << "f,n0,C,lambda,valid_error,ok,seconds\n";
    for (const auto& cell : result.table) {
      table << cell.hp.window_f << ',' << cell.hp.delay_n0 << ','
            << format_double(cell.hp.cost_c) << ',' << format_double(cell.hp.reg_lambda)
            << ',' << format_double(cell.validation_error) << ',' << (cell.ok ? 1 : 0)
            << ',' << format_double(cell.wall_seconds) << "\n";
    }
    manifest.emplace_back("valid", opt.valid_path);
    manifest.emplace_back("grid_table", opt.model_out + ".grid.csv");
  } else if (opt.grid == "none") {
    model = train_model(kind, data.x, *data.y, hp);
  } else {
    throw std::runtime_error("train: --grid must be 'none' or 'default'");
  }

  save_model(opt.model_out, model);

  const bool converged = model_converged(model);
  if (!converged)
    std::cerr << "warning: inner solver did not fully converge; model saved anyway\n";

  manifest.emplace_back("chosen_C", format_double(hp.cost_c));
  if (kind == TrainerKind::Filter)
    manifest.emplace_back("chosen_lambda", format_double(hp.reg_lambda));
  manifest.emplace_back("f", std::to_string(hp.window_f));
  manifest.emplace_back("n0", std::to_string(hp.delay_n0));
  manifest.emplace_back("svm_tol", format_double(opt.svm_tol));
  manifest.emplace_back("svm_max_iter", std::to_string(opt.svm_max_iter));
  manifest.emplace_back("max_outer", std::to_string(opt.max_outer));
  manifest.emplace_back("rel_obj_tol", format_double(opt.rel_obj_tol));
  manifest.emplace_back("filter_change_tol", format_double(opt.filter_change_tol));
  manifest.emplace_back("n_samples", std::to_string(data.x.n_samples()));
  manifest.emplace_back("n_channels", std::to_string(data.x.n_channels()));
  manifest.emplace_back("converged", converged ? "1" : "0");
  manifest.emplace_back("model", opt.model_out);

  if (kind == TrainerKind::Filter || kind == TrainerKind::Avg) {
    const std::string trace_path = opt.model_out + ".trace.csv";
    std::ofstream trace(trace_path);
    trace << "class,iter,objective,step\n";
    for (std::size_t k = 0; k < model.members.size(); ++k)
      append_member_trace(trace, model.classes[k], model.members[k]);
    manifest.emplace_back("trace", trace_path);
  }

  write_key_value(opt.model_out + ".manifest", manifest);
  std::cerr << "model written to " << opt.model_out << "\n";
}

// ---------------------------------------------------------------------------
// predict / eval

struct PredictOptions {
  std::string model_path;
  std::string data_path;
  std::string out_path;
};

void run_predict(const PredictOptions& opt) {
  const SequenceModel model = load_model(opt.model_path);
  const SignalData data = read_signal_csv(opt.data_path);

  std::ofstream out(opt.out_path);
  if (!out) throw std::runtime_error(opt.out_path + ": cannot open for writing");

  if (model.multiclass) {
    const Matrix scores = ova_scores(model, data.x);
    const LabelSequence labels = predict_ova(model, data.x);
    out << "t";
    for (int k : model.classes) out << ",score_" << k;
    out << ",label\n";
    for (Index i = 0; i < scores.rows(); ++i) {
      out << (i + 1);
      for (Index k = 0; k < scores.cols(); ++k) out << ',' << format_double(scores(i, k));
      out << ',' << labels.labels[i] << "\n";
    }
  } else {
    const Vector scores = binary_scores(model.members[0], data.x);
    out << "t,score,label\n";
    for (Index i = 0; i < scores.size(); ++i) {
      out << (i + 1) << ',' << format_double(scores[i]) << ','
          << (scores[i] < 0.0 ? -1 : 1) << "\n";
    }
  }

  KeyValueList manifest;
  manifest.emplace_back("command", "predict");
  manifest.emplace_back("version", kVersion);
  manifest.emplace_back("model", opt.model_path);
  manifest.emplace_back("data", opt.data_path);
  manifest.emplace_back("out", opt.out_path);
  write_key_value(opt.out_path + ".manifest", manifest);
}

struct EvalOptions {
  std::string model_path;
  std::string data_path;
  std::string report_path;
};

void run_eval(const EvalOptions& opt) {
  const SequenceModel model = load_model(opt.model_path);
  const SignalData data = read_signal_csv(opt.data_path);
  if (!data.y) throw std::runtime_error(opt.data_path + ": eval needs a label column");

  const LabelSequence pred = predict_labels(model, data.x);
  const double error = error_rate(pred, *data.y);
  std::cout << format_double(error) << "\n";

  if (!opt.report_path.empty()) {
    const bool fresh = !fs::exists(opt.report_path);
    std::ofstream report(opt.report_path, std::ios::app);
    if (!report) throw std::runtime_error(opt.report_path + ": cannot open for writing");
    if (fresh) report << "model,data,n_samples,n_errors,error_rate\n";
    Index wrong = 0;
    for (Index i = 0; i < pred.size(); ++i)
      if (pred.labels[i] != data.y->labels[i]) ++wrong;
    report << opt.model_path << ',' << opt.data_path << ',' << pred.size() << ',' << wrong
           << ',' << format_double(error) << "\n";

    KeyValueList manifest;
    manifest.emplace_back("command", "eval");
    manifest.emplace_back("version", kVersion);
    manifest.emplace_back("model", opt.model_path);
    manifest.emplace_back("data", opt.data_path);
    manifest.emplace_back("error_rate", format_double(error));
    write_key_value(opt.report_path + ".manifest", manifest);
  }
}

// ---------------------------------------------------------------------------
// export-filter

struct ExportOptions {
  std::string model_path;
  std::string out_path;
};

void run_export(const ExportOptions& opt) {
  const SequenceModel model = load_model(opt.model_path);

  KeyValueList manifest;
  manifest.emplace_back("command", "export-filter");
  manifest.emplace_back("version", kVersion);
  manifest.emplace_back("model", opt.model_path);

  if (model.multiclass) {
    const fs::path base(opt.out_path);
    for (std::size_t k = 0; k < model.members.size(); ++k) {
      fs::path path = base.parent_path() /
                      (base.stem().string() + "_class" + std::to_string(model.classes[k]) +
                       base.extension().string());
      write_matrix_csv(path.string(), member_map(model.members[k]));
      manifest.emplace_back("map_class" + std::to_string(model.classes[k]), path.string());
    }
  } else {
    write_matrix_csv(opt.out_path, member_map(model.members[0]));
    manifest.emplace_back("map", opt.out_path);
  }
  write_key_value(opt.out_path + ".manifest", manifest);
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentCliOptions {
  std::string name;
  std::string out_dir;
  int runs = 10;
  std::uint64_t seed = kDefaultExperimentSeed;
  int window_f = 21;
  int delay_n0 = 11;
  std::vector<double> sigma_points;
  std::vector<int> nbtot_points;
  int n_train = 1000;
  int n_valid = 1000;
  int n_test = 5000;
  int jobs = default_jobs();
};

void write_experiment_details(const std::string& path, const ExperimentResult& result) {
  std::ofstream out(path);
  out << "sweep,method,run,error,C,lambda\n";
  for (const auto& point : result.points) {
    for (std::size_t r = 0; r < point.test_errors.size(); ++r) {
      out << format_double(point.sweep_value) << ',' << to_string(point.method) << ',' << r
          << ',' << format_double(point.test_errors[r]) << ','
          << format_double(point.chosen[r].cost_c) << ','
          << format_double(point.chosen[r].reg_lambda) << "\n";
    }
  }
}

void run_sweep_experiment(const ExperimentCliOptions& opt, SweepSide side) {
  ExperimentOptions options;
  options.base_seed = opt.seed;
  options.run_seeds.clear();
  for (int r = 1; r <= opt.runs; ++r) options.run_seeds.push_back(static_cast<std::uint64_t>(r));
  options.window_f = opt.window_f;
  options.delay_n0 = opt.delay_n0;
  options.sigma_points = opt.sigma_points;
  options.nbtot_points = opt.nbtot_points;
  options.n_train = opt.n_train;
  options.n_valid = opt.n_valid;
  options.n_test = opt.n_test;
  options.n_jobs = opt.jobs;

  const ExperimentResult result = run_figure2_experiment(side, options);
  write_experiment_csv((fs::path(opt.out_dir) / "results.csv").string(), result);
  write_experiment_details((fs::path(opt.out_dir) / "details.csv").string(), result);

  KeyValueList manifest;
  manifest.emplace_back("command", "experiment");
  manifest.emplace_back("name", opt.name);
  manifest.emplace_back("version", kVersion);
  manifest.emplace_back("generator", rng_identity());
  manifest.emplace_back("base_seed", std::to_string(opt.seed));
  manifest.emplace_back("run_seeds", join_ints(options.run_seeds));
  manifest.emplace_back("f", std::to_string(opt.window_f));
  manifest.emplace_back("n0", std::to_string(opt.delay_n0));
  manifest.emplace_back("C_grid", join_doubles(options.cost_c_values));
  manifest.emplace_back("lambda_grid", join_doubles(options.lambda_values));
  manifest.emplace_back(
      "points", side == SweepSide::Sigma
                    ? join_doubles(options.sigma_points.empty() ? default_sigma_points()
                                                                : options.sigma_points)
                    : join_ints(options.nbtot_points.empty() ? default_nbtot_points()
                                                             : options.nbtot_points));
  manifest.emplace_back("n_train", std::to_string(opt.n_train));
  manifest.emplace_back("n_valid", std::to_string(opt.n_valid));
  manifest.emplace_back("n_test", std::to_string(opt.n_test));
  manifest.emplace_back("jobs", std::to_string(opt.jobs));
  write_key_value((fs::path(opt.out_dir) / "manifest.txt").string(), manifest);

  for (const auto& point : result.points) {
    std::cerr << "sweep=" << point.sweep_value << " method=" << to_string(point.method)
              << " mean_error=" << point.mean_error << " (n=" << point.n_seeds << ")\n";
  }
}

void run_figure1_experiment(const ExperimentCliOptions& opt) {
  ToySpec base;
  base.nbtot = 1;
  base.nbrel = 1;
  base.sigma = 1.0;
  base.seed = opt.seed;
  ToyTriple triple = make_toy_triple(base);
  triple.train.n_samples = opt.n_train;
  triple.valid.n_samples = opt.n_valid;
  triple.test.n_samples = opt.n_test;

  const auto [x_train, y_train] = generate_toy(triple.train);
  const auto [x_valid, y_valid] = generate_toy(triple.valid);
  const auto [x_test, y_test] = generate_toy(triple.test);

  const GridSearchResult plain =
      grid_search(x_train, y_train, x_valid, y_valid,
                  GridSpec::for_kind(TrainerKind::Plain, 1, 0), opt.jobs);
  const GridSearchResult filter =
      grid_search(x_train, y_train, x_valid, y_valid,
                  GridSpec::for_kind(TrainerKind::Filter, opt.window_f, opt.delay_n0),
                  opt.jobs);

  const double plain_error =
      error_rate(predict_labels(plain.best_model, x_test), y_test);
  const double filter_error =
      error_rate(predict_labels(filter.best_model, x_test), y_test);

  const auto& filter_member = std::get<FilterModel>(filter.best_model.members[0]);
  const SignalMatrix filtered = filter_apply(x_test, filter_member.filter);

  std::ofstream samples((fs::path(opt.out_dir) / "samples.csv").string());
  samples << "t,label,raw,filtered\n";
  for (Index i = 0; i < x_test.n_samples(); ++i) {
    samples << (i + 1) << ',' << y_test.labels[i] << ',' << format_double(x_test.data(i, 0))
            << ',' << format_double(filtered.data(i, 0)) << "\n";
  }

  std::ofstream summary((fs::path(opt.out_dir) / "summary.csv").string());
  summary << "method,test_error,C,lambda\n";
  summary << "plain," << format_double(plain_error) << ','
          << format_double(plain.best.cost_c) << ",\n";
  summary << "filter," << format_double(filter_error) << ','
          << format_double(filter.best.cost_c) << ','
          << format_double(filter.best.reg_lambda) << "\n";

  KeyValueList manifest;
  manifest.emplace_back("command", "experiment");
  manifest.emplace_back("name", opt.name);
  manifest.emplace_back("version", kVersion);
  manifest.emplace_back("generator", rng_identity());
  manifest.emplace_back("seed", std::to_string(opt.seed));
  manifest.emplace_back("f", std::to_string(opt.window_f));
  manifest.emplace_back("n0", std::to_string(opt.delay_n0));
  manifest.emplace_back("plain_test_error", format_double(plain_error));
  manifest.emplace_back("filter_test_error", format_double(filter_error));
  write_key_value((fs::path(opt.out_dir) / "manifest.txt").string(), manifest);

  std::cerr << "plain test error " << plain_error << ", filtered test error "
            << filter_error << "\n";
}

void run_experiment(const ExperimentCliOptions& opt) {
  fs::create_directories(opt.out_dir);
  if (opt.name == "figure2-left") {
    run_sweep_experiment(opt, SweepSide::Sigma);
  } else if (opt.name == "figure2-right") {
    run_sweep_experiment(opt, SweepSide::Dimension);
  } else if (opt.name == "toy-figure1") {
    run_figure1_experiment(opt);
  } else {
    throw std::runtime_error("unknown experiment name: " + opt.name);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Large-margin FIR filter learning for signal sequence labeling"};
  app.set_version_flag("--version", std::string("filtersvm ") + kVersion);
  app.require_subcommand(1);

  // toygen -------------------------------------------------------------
  ToygenOptions toygen;
  std::string toygen_config;
  auto* toygen_cmd = app.add_subcommand("toygen", "Generate a synthetic labeled dataset");
  toygen_cmd->add_option("--config", toygen_config, "key=value config file; flags override");
  toygen_cmd->add_option("--nbtot", toygen.spec.nbtot, "Total channels");
  toygen_cmd->add_option("--nbrel", toygen.spec.nbrel, "Discriminative channels");
  toygen_cmd->add_option("--sigma", toygen.spec.sigma, "Noise standard deviation");
  toygen_cmd->add_option("--seed", toygen.spec.seed, "Generator seed");
  toygen_cmd->add_option("--region-min", toygen.spec.region_len_min, "Shortest region");
  toygen_cmd->add_option("--region-max", toygen.spec.region_len_max, "Longest region");
  toygen_cmd->add_option("--lags", toygen.spec.lags, "Per-channel lags")->delimiter(',');
  toygen_cmd->add_option("--n-train", toygen.n_train, "Training samples");
  toygen_cmd->add_option("--n-valid", toygen.n_valid, "Validation samples");
  toygen_cmd->add_option("--n-test", toygen.n_test, "Test samples");
  toygen_cmd->add_option("--classes", toygen.multiclass_k,
                         "Generate K classes instead of binary labels");
  toygen_cmd->add_option("--out", toygen.out_dir, "Output directory");
  toygen_cmd->callback([&] {
    apply_config(*toygen_cmd, toygen_config);
    require_value(toygen.out_dir, "toygen: --out");
    run_toygen(toygen);
  });

  // train --------------------------------------------------------------
  TrainOptions train;
  std::string train_config;
  auto* train_cmd = app.add_subcommand("train", "Train a sequence labeling model");
  train_cmd->add_option("--config", train_config, "key=value config file; flags override");
  train_cmd->add_option("--method", train.method, "plain|avg|window|filter");
  train_cmd->add_option("--data", train.data_path, "Labeled training CSV");
  train_cmd->add_option("--valid", train.valid_path, "Labeled validation CSV (for --grid)");
  train_cmd->add_option("--out", train.model_out, "Model output path");
  train_cmd->add_option("--grid", train.grid, "none|default");
  train_cmd->add_option("--C", train.cost_c, "SVM cost");
  train_cmd->add_option("--lambda", train.reg_lambda, "Filter regularization");
  train_cmd->add_option("--f", train.window_f, "Filter/window length");
  train_cmd->add_option("--n0", train.delay_n0, "Filter delay");
  train_cmd->add_option("--grid-C", train.grid_c, "C candidates")->delimiter(',');
  train_cmd->add_option("--grid-lambda", train.grid_lambda, "lambda candidates")->delimiter(',');
  train_cmd->add_option("--svm-tol", train.svm_tol, "Inner solver tolerance");
  train_cmd->add_option("--svm-max-iter", train.svm_max_iter, "Inner solver iteration cap");
  train_cmd->add_option("--max-outer", train.max_outer, "Outer descent iteration cap");
  train_cmd->add_option("--rel-obj-tol", train.rel_obj_tol, "Relative objective tolerance");
  train_cmd->add_option("--filter-change-tol", train.filter_change_tol,
                        "Relative filter change tolerance");
  train_cmd->add_option("--jobs", train.jobs, "Concurrent grid cells");
  train_cmd->callback([&] {
    apply_config(*train_cmd, train_config);
    require_value(train.method, "train: --method");
    require_value(train.data_path, "train: --data");
    require_value(train.model_out, "train: --out");
    run_train(train);
  });

  // predict ------------------------------------------------------------
  PredictOptions predict;
  std::string predict_config;
  auto* predict_cmd = app.add_subcommand("predict", "Score and label a dataset");
  predict_cmd->add_option("--config", predict_config, "key=value config file; flags override");
  predict_cmd->add_option("--model", predict.model_path, "Model file");
  predict_cmd->add_option("--data", predict.data_path, "Input CSV");
  predict_cmd->add_option("--out", predict.out_path, "Predictions CSV");
  predict_cmd->callback([&] {
    apply_config(*predict_cmd, predict_config);
    require_value(predict.model_path, "predict: --model");
    require_value(predict.data_path, "predict: --data");
    require_value(predict.out_path, "predict: --out");
    run_predict(predict);
  });

  // eval ---------------------------------------------------------------
  EvalOptions eval;
  std::string eval_config;
  auto* eval_cmd = app.add_subcommand("eval", "Report the error rate on labeled data");
  eval_cmd->add_option("--config", eval_config, "key=value config file; flags override");
  eval_cmd->add_option("--model", eval.model_path, "Model file");
  eval_cmd->add_option("--data", eval.data_path, "Labeled CSV");
  eval_cmd->add_option("--report", eval.report_path, "Append a row to this report CSV");
  eval_cmd->callback([&] {
    apply_config(*eval_cmd, eval_config);
    require_value(eval.model_path, "eval: --model");
    require_value(eval.data_path, "eval: --data");
    run_eval(eval);
  });

  // export-filter --------------------------------------------------------
  ExportOptions exportopt;
  std::string export_config;
  auto* export_cmd =
      app.add_subcommand("export-filter", "Write a model's space-time map as CSV");
  export_cmd->add_option("--config", export_config, "key=value config file; flags override");
  export_cmd->add_option("--model", exportopt.model_path, "Model file");
  export_cmd->add_option("--out", exportopt.out_path, "Map CSV path");
  export_cmd->callback([&] {
    apply_config(*export_cmd, export_config);
    require_value(exportopt.model_path, "export-filter: --model");
    require_value(exportopt.out_path, "export-filter: --out");
    run_export(exportopt);
  });

  // experiment -----------------------------------------------------------
  ExperimentCliOptions experiment;
  std::string experiment_config;
  auto* experiment_cmd =
      app.add_subcommand("experiment", "Run a scripted, seeded experiment preset");
  experiment_cmd->add_option("--config", experiment_config,
                             "key=value config file; flags override");
  experiment_cmd
      ->add_option("name", experiment.name, "figure2-left|figure2-right|toy-figure1")
      ->required()
      ->check(CLI::IsMember({"figure2-left", "figure2-right", "toy-figure1"}));
  experiment_cmd->add_option("--out", experiment.out_dir, "Output directory");
  experiment_cmd->add_option("--runs", experiment.runs, "Repetitions per sweep point");
  experiment_cmd->add_option("--seed", experiment.seed, "Base seed");
  experiment_cmd->add_option("--f", experiment.window_f, "Filter/window length");
  experiment_cmd->add_option("--n0", experiment.delay_n0, "Filter delay");
  experiment_cmd->add_option("--sigma-points", experiment.sigma_points, "Noise sweep points")
      ->delimiter(',');
  experiment_cmd->add_option("--nbtot-points", experiment.nbtot_points,
                             "Channel-count sweep points")
      ->delimiter(',');
  experiment_cmd->add_option("--n-train", experiment.n_train, "Training samples");
  experiment_cmd->add_option("--n-valid", experiment.n_valid, "Validation samples");
  experiment_cmd->add_option("--n-test", experiment.n_test, "Test samples");
  experiment_cmd->add_option("--jobs", experiment.jobs, "Concurrent work items");
  experiment_cmd->callback([&] {
    apply_config(*experiment_cmd, experiment_config);
    require_value(experiment.out_dir, "experiment: --out");
    run_experiment(experiment);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
