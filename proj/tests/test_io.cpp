#include "fsvm/io.hpp"

#include "fsvm/rng.hpp"
#include "fsvm/toy.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace fsvm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("fsvm_io_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_CASE("signal CSV round trip is bit exact") {
  TempDir dir;
  Rng rng(81, "io");
  SignalMatrix x{oracles::random_matrix(rng, 50, 3)};
  const LabelSequence y = LabelSequence::binary(oracles::random_signs(rng, 50));

  const std::string path = dir.file("signal.csv");
  write_signal_csv(path, x, &y);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,ch1,ch2,ch3,label");

  const SignalData back = read_signal_csv(path);
  CHECK(back.x.data == x.data);
  REQUIRE(back.y.has_value());
  CHECK(back.y->labels == y.labels);
  CHECK(back.y->is_binary());
}

TEST_CASE("label-free signal CSV reads without labels") {
  TempDir dir;
  Rng rng(82, "io");
  SignalMatrix x{oracles::random_matrix(rng, 12, 2)};
  const std::string path = dir.file("nolabel.csv");
  write_signal_csv(path, x);
  const SignalData back = read_signal_csv(path);
  CHECK(back.x.data == x.data);
  CHECK(!back.y.has_value());
}

TEST_CASE("multiclass labels read back with the right arity") {
  TempDir dir;
  const std::string path = dir.file("mc.csv");
  std::ofstream out(path);
  out << "t,ch1,label\n1,0.5,1\n2,0.25,3\n3,-0.5,2\n";
  out.close();
  const SignalData back = read_signal_csv(path);
  REQUIRE(back.y.has_value());
  CHECK(!back.y->is_binary());
  CHECK(back.y->n_classes == 3);
}

TEST_CASE("malformed CSV reports the offending row") {
  TempDir dir;
  const std::string path = dir.file("bad.csv");
  std::ofstream out(path);
  out << "t,ch1,label\n1,0.5,1\n2,oops,1\n";
  out.close();
  try {
    (void)read_signal_csv(path);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("ragged CSV rows are rejected with their row number") {
  TempDir dir;
  const std::string path = dir.file("ragged.csv");
  std::ofstream out(path);
  out << "t,ch1,ch2,label\n1,0.5,0.25,1\n2,0.5,1\n";
  out.close();
  try {
    (void)read_signal_csv(path);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("model files round trip bit exactly") {
  TempDir dir;
  Rng rng(83, "io");

  SUBCASE("window model") {
    WindowModel w;
    w.weights = oracles::random_matrix(rng, 4, 3);
    w.bias = rng.normal();
    w.window_f = 4;
    w.delay_n0 = 2;
    w.cost_c = 0.125;
    w.converged = true;

    SequenceModel model;
    model.kind = TrainerKind::Window;
    model.multiclass = false;
    model.classes = {1};
    model.members = {w};

    const std::string path = dir.file("window.model");
    save_model(path, model);
    const SequenceModel back = load_model(path);
    CHECK(back.kind == TrainerKind::Window);
    CHECK(!back.multiclass);
    const auto& wb = std::get<WindowModel>(back.members[0]);
    CHECK(wb.weights == w.weights);
    CHECK(wb.bias == w.bias);
    CHECK(wb.window_f == 4);
    CHECK(wb.delay_n0 == 2);
    CHECK(wb.cost_c == 0.125);
  }

  SUBCASE("multiclass filter model") {
    SequenceModel model;
    model.kind = TrainerKind::Filter;
    model.multiclass = true;
    model.classes = {1, 2, 3};
    for (int k = 0; k < 3; ++k) {
      FilterModel fm;
      fm.filter = FilterBank(oracles::random_matrix(rng, 5, 2), 3);
      fm.model.weights = Vector(2);
      fm.model.weights << rng.normal(), rng.normal();
      fm.model.bias = rng.normal();
      fm.cost_c = 2.0;
      fm.reg_lambda = 0.25;
      model.members.push_back(fm);
    }

    const std::string path = dir.file("filter.model");
    save_model(path, model);
    const SequenceModel back = load_model(path);
    CHECK(back.multiclass);
    CHECK(back.classes == model.classes);
    REQUIRE(back.members.size() == 3);
    for (int k = 0; k < 3; ++k) {
      const auto& got = std::get<FilterModel>(back.members[static_cast<std::size_t>(k)]);
      const auto& want = std::get<FilterModel>(model.members[static_cast<std::size_t>(k)]);
      CHECK(got.filter.coeffs == want.filter.coeffs);
      CHECK(got.filter.delay_n0 == want.filter.delay_n0);
      CHECK(got.model.weights == want.model.weights);
      CHECK(got.model.bias == want.model.bias);
      CHECK(got.reg_lambda == want.reg_lambda);
    }
  }
}

TEST_CASE("unsupported model versions are rejected") {
  TempDir dir;
  const std::string path = dir.file("future.model");
  std::ofstream out(path);
  out << "filtersvm-model 99\nkind plain\nmulticlass 0\nmembers 1\n";
  out.close();
  CHECK_THROWS_AS((void)load_model(path), std::runtime_error);
}

TEST_CASE("matrix CSV round trip is bit exact") {
  TempDir dir;
  Rng rng(84, "io");
  const Matrix m = oracles::random_matrix(rng, 6, 4);
  const std::string path = dir.file("map.csv");
  write_matrix_csv(path, m);
  CHECK(read_matrix_csv(path) == m);
}

TEST_CASE("key=value files") {
  TempDir dir;

  SUBCASE("write/read round trip") {
    const std::string path = dir.file("kv.txt");
    const KeyValueList entries = {{"alpha", "1"}, {"path", "a b c"}, {"x", "0.5"}};
    write_key_value(path, entries);
    CHECK(read_key_value(path) == entries);
  }
  SUBCASE("comments and blank lines are skipped") {
    const std::string path = dir.file("kv2.txt");
    std::ofstream out(path);
    out << "# a comment\n\nkey = value with spaces \n  # indented comment\nn=3\n";
    out.close();
    const KeyValueList entries = read_key_value(path);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].first == "key");
    CHECK(entries[0].second == "value with spaces");
    CHECK(entries[1] == std::pair<std::string, std::string>{"n", "3"});
  }
  SUBCASE("lines without '=' are rejected with their number") {
    const std::string path = dir.file("kv3.txt");
    std::ofstream out(path);
    out << "good=1\nnot a pair\n";
    out.close();
    try {
      (void)read_key_value(path);
      FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("experiment CSV has one row per sweep point and method") {
  TempDir dir;
  ExperimentResult result;
  result.side = SweepSide::Sigma;
  for (double sweep : {1.0, 2.0}) {
    for (TrainerKind kind : {TrainerKind::Plain, TrainerKind::Filter}) {
      MethodCurvePoint point;
      point.sweep_value = sweep;
      point.method = kind;
      point.test_errors = {0.1, 0.2};
      point.mean_error = 0.15;
      point.std_error = 0.05;
      point.n_seeds = 2;
      result.points.push_back(point);
    }
  }
  const std::string path = dir.file("results.csv");
  write_experiment_csv(path, result);

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "sweep,method,mean_error,std_error,n_seeds");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("missing files raise errors naming the path") {
  try {
    (void)read_signal_csv("/nonexistent/nowhere.csv");
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("nowhere.csv") != std::string::npos);
  }
}
