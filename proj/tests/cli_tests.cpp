// End-to-end tests of the command-line tool. Spawns the binary given as
// argv[1] and checks files, exit codes and stdout against the library.

#include "fsvm/harness.hpp"
#include "fsvm/io.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cerr << "FAILED: " << what << "\n";
  }
}

struct CmdResult {
  int status = -1;
  std::string out;
};

std::string g_binary;
fs::path g_dir;

CmdResult run(const std::string& args) {
  const std::string cmd =
      g_binary + " " + args + " 2>>" + (g_dir / "stderr.log").string();
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {};
  CmdResult result;
  char buf[4096];
  while (fgets(buf, sizeof(buf), pipe) != nullptr) result.out += buf;
  const int rc = pclose(pipe);
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::size_t count_lines(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

std::string manifest_value(const fs::path& path, const std::string& key) {
  if (!fs::exists(path)) return "<missing manifest>";
  for (const auto& [k, v] : fsvm::read_key_value(path.string()))
    if (k == key) return v;
  return "";
}

void test_toygen() {
  const fs::path dir = g_dir / "toy";
  CmdResult r = run("toygen --nbtot 30 --nbrel 3 --sigma 3 --seed 1 --out " +
                    dir.string());
  check(r.status == 0, "toygen exits 0");
  check(count_lines(dir / "train.csv") == 1001, "train.csv has 1000 rows + header");
  check(count_lines(dir / "valid.csv") == 1001, "valid.csv has 1000 rows + header");
  check(count_lines(dir / "test.csv") == 5001, "test.csv has 5000 rows + header");
  check(fs::exists(dir / "metadata.txt"), "metadata sidecar exists");
  check(manifest_value(dir / "metadata.txt", "generator") ==
            "mt19937_64/splitmix64-role/u53/box-muller v1",
        "metadata records the generator identity");

  const std::string before = slurp(dir / "train.csv");
  r = run("toygen --nbtot 30 --nbrel 3 --sigma 3 --seed 1 --out " + dir.string());
  check(r.status == 0, "toygen rerun exits 0");
  check(slurp(dir / "train.csv") == before, "rerun is byte-identical");

  r = run("toygen --nbrel 5 --nbtot 3 --out " + (g_dir / "bad").string());
  check(r.status != 0, "invalid spec exits nonzero");
}

void test_pipeline() {
  const fs::path dir = g_dir / "pipe";
  run("toygen --nbtot 2 --nbrel 1 --sigma 1 --seed 3 --n-train 400 --n-test 800 --out " +
      dir.string());

  const std::string model = (dir / "model.txt").string();
  CmdResult r = run("train --method filter --data " + (dir / "train.csv").string() +
                    " --out " + model + " --f 5 --n0 2 --C 1 --lambda 1");
  check(r.status == 0, "train exits 0");
  check(fs::exists(model), "model file written");
  check(manifest_value(model + ".manifest", "method") == "filter",
        "manifest records the method");
  check(manifest_value(model + ".manifest", "converged") == "1",
        "manifest records convergence");
  check(count_lines(model + ".trace.csv") >= 3, "descent trace written");

  const std::string pred = (dir / "pred.csv").string();
  r = run("predict --model " + model + " --data " + (dir / "test.csv").string() +
          " --out " + pred);
  check(r.status == 0, "predict exits 0");
  check(count_lines(pred) == 801, "one prediction row per sample");

  r = run("eval --model " + model + " --data " + (dir / "test.csv").string() +
          " --report " + (dir / "report.csv").string());
  check(r.status == 0, "eval exits 0");
  const double error = std::stod(r.out);
  check(error >= 0.0 && error <= 1.0, "eval prints an error rate");
  check(count_lines(dir / "report.csv") == 2, "report row appended");

  // Recompute the error from the prediction file; it must match exactly.
  std::ifstream pin(pred);
  std::string line;
  std::getline(pin, line);  // header
  const fsvm::SignalData test = fsvm::read_signal_csv((dir / "test.csv").string());
  std::size_t i = 0, wrong = 0;
  while (std::getline(pin, line)) {
    const auto comma = line.rfind(',');
    const int label = std::stoi(line.substr(comma + 1));
    if (label != test.y->labels[static_cast<fsvm::Index>(i)]) ++wrong;
    ++i;
  }
  check(i == 800, "prediction file covers the test set");
  check(static_cast<double>(wrong) / 800.0 == error,
        "eval matches the error recomputed from predict output");

  {
    std::ofstream unlabeled(dir / "unlabeled.csv");
    unlabeled << "t,ch1,ch2\n1,0.25,0.5\n2,-0.25,0.75\n";
  }
  r = run("eval --model " + model + " --data " + (dir / "unlabeled.csv").string());
  check(r.status != 0, "eval without a label column exits nonzero");
}

void test_avg_f1_equals_plain() {
  const fs::path dir = g_dir / "avg1";
  run("toygen --nbtot 2 --nbrel 1 --sigma 1 --seed 4 --n-train 300 --n-test 300 --out " +
      dir.string());
  const std::string data = (dir / "train.csv").string();
  run("train --method avg --f 1 --n0 0 --C 2 --data " + data + " --out " +
      (dir / "avg.txt").string());
  run("train --method plain --C 2 --data " + data + " --out " +
      (dir / "plain.txt").string());
  run("predict --model " + (dir / "avg.txt").string() + " --data " +
      (dir / "test.csv").string() + " --out " + (dir / "avg_pred.csv").string());
  run("predict --model " + (dir / "plain.txt").string() + " --data " +
      (dir / "test.csv").string() + " --out " + (dir / "plain_pred.csv").string());

  // Same labels; scores may differ in representation (w vs w*F with F=1).
  std::ifstream a(dir / "avg_pred.csv"), b(dir / "plain_pred.csv");
  std::string la, lb;
  bool labels_match = true;
  while (std::getline(a, la) && std::getline(b, lb)) {
    if (la.substr(la.rfind(',')) != lb.substr(lb.rfind(','))) labels_match = false;
  }
  check(labels_match, "avg with f=1 predicts like plain");
}

void test_export() {
  const fs::path dir = g_dir / "export";
  run("toygen --nbtot 3 --nbrel 2 --sigma 1 --seed 5 --n-train 300 --out " +
      dir.string());
  const std::string model = (dir / "avg.txt").string();
  run("train --method avg --f 4 --n0 2 --C 1 --data " + (dir / "train.csv").string() +
      " --out " + model);
  const std::string map_path = (dir / "map.csv").string();
  CmdResult r = run("export-filter --model " + model + " --out " + map_path);
  check(r.status == 0, "export-filter exits 0");

  const fsvm::SequenceModel loaded = fsvm::load_model(model);
  const fsvm::Matrix expected = fsvm::member_map(loaded.members[0]);
  const fsvm::Matrix read_back = fsvm::read_matrix_csv(map_path);
  check(read_back == expected, "exported map round-trips bit-exactly");

  // Uniform averaging filter: every map row equals w/f.
  bool rows_equal = true;
  for (fsvm::Index m = 1; m < read_back.rows(); ++m)
    if (read_back.row(m) != read_back.row(0)) rows_equal = false;
  check(rows_equal, "averaging model map has identical rows");
  const auto& fm = std::get<fsvm::FilterModel>(loaded.members[0]);
  check(read_back(0, 0) == fm.model.weights[0] * fm.filter.coeffs(0, 0),
        "map entries are w_j * F(m,j)");
}

void test_grid_train() {
  const fs::path dir = g_dir / "grid";
  run("toygen --nbtot 2 --nbrel 1 --sigma 2 --seed 6 --n-train 300 --n-valid 300 --out " +
      dir.string());
  const std::string model = (dir / "model.txt").string();
  CmdResult r = run("train --method window --f 5 --n0 2 --grid default --data " +
                    (dir / "train.csv").string() + " --valid " +
                    (dir / "valid.csv").string() + " --out " + model);
  check(r.status == 0, "grid train exits 0");
  check(!manifest_value(model + ".manifest", "chosen_C").empty(),
        "manifest records the chosen C");
  check(fs::exists(model + ".grid.csv"), "grid table written");
  check(count_lines(model + ".grid.csv") == 7, "one grid row per C candidate");

  r = run("train --method window --grid default --data " +
          (dir / "train.csv").string() + " --out " + (dir / "x.txt").string());
  check(r.status != 0, "grid without --valid exits nonzero");
}

void test_experiment() {
  const fs::path dir = g_dir / "exp";
  const std::string args =
      "experiment figure2-left --runs 2 --sigma-points 1 --f 5 --n0 2 "
      "--n-train 150 --n-valid 150 --n-test 300 --seed 99 --out ";
  CmdResult r = run(args + dir.string());
  check(r.status == 0, "experiment exits 0");
  check(count_lines(dir / "results.csv") == 5, "one row per method plus header");
  check(fs::exists(dir / "manifest.txt"), "experiment manifest written");
  check(fs::exists(dir / "details.csv"), "experiment details written");

  const std::string before = slurp(dir / "results.csv");
  r = run(args + (g_dir / "exp2").string());
  check(r.status == 0, "experiment rerun exits 0");
  check(slurp(g_dir / "exp2" / "results.csv") == before,
        "rerun with the same seeds is byte-identical");
}

void test_eval_matches_harness() {
  // The CLI pipeline on a toy triple must reproduce the in-process experiment
  // error bit for bit.
  fsvm::ExperimentOptions options;
  options.base_seed = 500;
  options.run_seeds = {7};
  options.sigma_points = {2.0};
  options.methods = {fsvm::TrainerKind::Plain};
  options.n_train = 300;
  options.n_valid = 300;
  options.n_test = 600;
  const fsvm::ExperimentResult harness =
      fsvm::run_figure2_experiment(fsvm::SweepSide::Sigma, options);
  const double harness_error = harness.points[0].test_errors[0];

  const fs::path dir = g_dir / "cross";
  // The sigma sweep seeds each point at base_seed + 101*point + run_seed.
  run("toygen --nbtot 30 --nbrel 3 --sigma 2 --seed 507 --n-train 300 --n-valid 300 "
      "--n-test 600 --out " +
      dir.string());
  run("train --method plain --grid default --data " + (dir / "train.csv").string() +
      " --valid " + (dir / "valid.csv").string() + " --out " +
      (dir / "model.txt").string());
  CmdResult r = run("eval --model " + (dir / "model.txt").string() + " --data " +
                    (dir / "test.csv").string());
  check(r.status == 0, "cross-check eval exits 0");
  check(std::stod(r.out) == harness_error,
        "CLI pipeline reproduces the harness test error exactly");
}

void test_config_file() {
  const fs::path dir = g_dir / "config";
  run("toygen --nbtot 2 --nbrel 1 --sigma 1 --seed 8 --n-train 300 --out " +
      dir.string());
  const fs::path conf = dir / "train.conf";
  {
    std::ofstream out(conf);
    out << "# training configuration\n";
    out << "method=plain\n";
    out << "C=2\n";
  }
  const std::string model = (dir / "model.txt").string();
  CmdResult r = run("train --config " + conf.string() + " --data " +
                    (dir / "train.csv").string() + " --out " + model);
  check(r.status == 0, "config-driven train exits 0");
  check(manifest_value(model + ".manifest", "method") == "plain",
        "config sets the method");
  check(manifest_value(model + ".manifest", "chosen_C") == "2", "config sets C");

  r = run("train --config " + conf.string() + " --C 5 --data " +
          (dir / "train.csv").string() + " --out " + model);
  check(r.status == 0, "flag-over-config train exits 0");
  check(manifest_value(model + ".manifest", "chosen_C") == "5",
        "flags override config values");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_tests <path-to-filtersvm-binary>\n";
    return 2;
  }
  g_binary = argv[1];
  g_dir = fs::temp_directory_path() / ("fsvm_cli_test_" + std::to_string(::getpid()));
  fs::remove_all(g_dir);
  fs::create_directories(g_dir);

  test_toygen();
  test_pipeline();
  test_avg_f1_equals_plain();
  test_export();
  test_grid_train();
  test_experiment();
  test_eval_matches_harness();
  test_config_file();

  fs::remove_all(g_dir);
  if (failures != 0) {
    std::cerr << failures << " CLI check(s) failed\n";
    return 1;
  }
  std::cout << "all CLI checks passed\n";
  return 0;
}
