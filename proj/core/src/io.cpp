#include "fsvm/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fsvm {

namespace {

std::runtime_error io_error(const std::string& path, const std::string& what) {
  return std::runtime_error(path + ": " + what);
}

std::runtime_error row_error(const std::string& path, std::size_t line_no,
                             const std::string& what) {
  return std::runtime_error(path + ": line " + std::to_string(line_no) + ": " + what);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error(path, "cannot open for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error(path, "cannot open for reading");
  return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& field, const std::string& path, std::size_t line_no) {
  const std::string s = strip(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw row_error(path, line_no, "not a number: '" + field + "'");
  return value;
}

long parse_int(const std::string& field, const std::string& path, std::size_t line_no) {
  const std::string s = strip(field);
  long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw row_error(path, line_no, "not an integer: '" + field + "'");
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

SignalData read_signal_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw io_error(path, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split(line, ',');
  if (header.size() < 2 || strip(header[0]) != "t")
    throw row_error(path, 1, "expected header 't,ch1,...[,label]'");
  const bool has_label = strip(header.back()) == "label";
  const std::size_t d = header.size() - 1 - (has_label ? 1 : 0);
  if (d < 1) throw row_error(path, 1, "no channel columns");

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t n = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (strip(line).empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != header.size())
      throw row_error(path, line_no,
                      "expected " + std::to_string(header.size()) + " fields, got " +
                          std::to_string(fields.size()));
    parse_double(fields[0], path, line_no);  // t column: numeric, order given by file
    for (std::size_t j = 0; j < d; ++j)
      values.push_back(parse_double(fields[1 + j], path, line_no));
    if (has_label) labels.push_back(static_cast<int>(parse_int(fields.back(), path, line_no)));
    ++n;
  }
  if (n == 0) throw io_error(path, "no data rows");

  Matrix x(static_cast<Index>(n), static_cast<Index>(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      x(static_cast<Index>(i), static_cast<Index>(j)) = values[i * d + j];

  SignalData data;
  data.x = SignalMatrix(std::move(x));
  if (has_label) {
    IntVector y(static_cast<Index>(n));
    bool all_pm1 = true;
    int max_label = 0;
    for (std::size_t i = 0; i < n; ++i) {
      y[static_cast<Index>(i)] = labels[i];
      if (labels[i] != -1 && labels[i] != 1) all_pm1 = false;
      max_label = std::max(max_label, labels[i]);
    }
    if (all_pm1) {
      data.y = LabelSequence::binary(std::move(y));
    } else if (max_label >= 2) {
      data.y = LabelSequence::multiclass(std::move(y), max_label);
    } else {
      throw io_error(path, "labels are neither binary {-1,+1} nor multiclass {1..K}");
    }
  }
  return data;
}

void write_signal_csv(const std::string& path, const SignalMatrix& x,
                      const LabelSequence* y) {
  if (y != nullptr)
    detail::require(y->size() == x.n_samples(),
                    "write_signal_csv: signal and label lengths differ");
  std::ofstream out = open_out(path);
  out << "t";
  for (Index j = 0; j < x.n_channels(); ++j) out << ",ch" << (j + 1);
  if (y != nullptr) out << ",label";
  out << "\n";
  for (Index i = 0; i < x.n_samples(); ++i) {
    out << (i + 1);
    for (Index j = 0; j < x.n_channels(); ++j) out << ',' << format_double(x.data(i, j));
    if (y != nullptr) out << ',' << y->labels[i];
    out << "\n";
  }
  if (!out) throw io_error(path, "write failed");
}

namespace {

void save_member(std::ofstream& out, const BinaryModel& member, int class_label) {
  out << "member\n";
  out << "class " << class_label << "\n";
  if (const auto* w = std::get_if<WindowModel>(&member)) {
    out << "type window\n";
    out << "f " << w->window_f << "\n";
    out << "n0 " << w->delay_n0 << "\n";
    out << "d " << w->weights.cols() << "\n";
    out << "C " << format_double(w->cost_c) << "\n";
    out << "converged " << (w->converged ? 1 : 0) << "\n";
    out << "bias " << format_double(w->bias) << "\n";
    out << "coeffs\n";
    for (Index m = 0; m < w->weights.rows(); ++m) {
      for (Index j = 0; j < w->weights.cols(); ++j) {
        if (j > 0) out << ' ';
        out << format_double(w->weights(m, j));
      }
      out << "\n";
    }
  } else {
    const auto& fm = std::get<FilterModel>(member);
    out << "type filter\n";
    out << "f " << fm.filter.n_taps() << "\n";
    out << "n0 " << fm.filter.delay_n0 << "\n";
    out << "d " << fm.n_channels() << "\n";
    out << "C " << format_double(fm.cost_c) << "\n";
    out << "lambda " << format_double(fm.reg_lambda) << "\n";
    out << "stop_reason " << to_string(fm.trace.stop_reason) << "\n";
    out << "converged " << (fm.trace.inner_all_converged ? 1 : 0) << "\n";
    out << "bias " << format_double(fm.model.bias) << "\n";
    out << "weights";
    for (Index j = 0; j < fm.model.weights.size(); ++j)
      out << ' ' << format_double(fm.model.weights[j]);
    out << "\n";
    out << "coeffs\n";
    for (Index m = 0; m < fm.filter.n_taps(); ++m) {
      for (Index j = 0; j < fm.filter.n_channels(); ++j) {
        if (j > 0) out << ' ';
        out << format_double(fm.filter.coeffs(m, j));
      }
      out << "\n";
    }
  }
  out << "end\n";
}

class ModelReader {
 public:
  ModelReader(std::ifstream& in, std::string path) : in_(in), path_(std::move(path)) {}

  std::string next_line() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!strip(line).empty()) return line;
    }
    throw io_error(path_, "unexpected end of model file");
  }

  // "key value..." -> value..., enforcing the key.
  std::string expect(const std::string& key) {
    const std::string line = next_line();
    if (line.substr(0, key.size()) != key)
      throw row_error(path_, line_no_, "expected '" + key + "'");
    return strip(line.substr(key.size()));
  }

  double expect_double(const std::string& key) {
    return parse_double(expect(key), path_, line_no_);
  }
  long expect_int(const std::string& key) { return parse_int(expect(key), path_, line_no_); }

  std::vector<double> parse_row(const std::string& line, std::size_t expected) {
    std::istringstream ss(line);
    std::vector<double> row;
    std::string tok;
    while (ss >> tok) row.push_back(parse_double(tok, path_, line_no_));
    if (row.size() != expected)
      throw row_error(path_, line_no_,
                      "expected " + std::to_string(expected) + " values");
    return row;
  }

  std::size_t line_no() const { return line_no_; }
  const std::string& path() const { return path_; }

 private:
  std::ifstream& in_;
  std::string path_;
  std::size_t line_no_ = 0;
};

BinaryModel load_member(ModelReader& reader, int* class_label) {
  const std::string head = reader.next_line();
  if (head != "member") throw io_error(reader.path(), "expected 'member'");
  *class_label = static_cast<int>(reader.expect_int("class"));
  const std::string type = reader.expect("type");
  const Index f = reader.expect_int("f");
  const int n0 = static_cast<int>(reader.expect_int("n0"));
  const Index d = reader.expect_int("d");
  const double c = reader.expect_double("C");

  BinaryModel member;
  if (type == "window") {
    WindowModel w;
    w.window_f = static_cast<int>(f);
    w.delay_n0 = n0;
    w.cost_c = c;
    w.converged = reader.expect_int("converged") != 0;
    w.bias = reader.expect_double("bias");
    reader.expect("coeffs");
    w.weights.resize(f, d);
    for (Index m = 0; m < f; ++m) {
      const auto row = reader.parse_row(reader.next_line(), static_cast<std::size_t>(d));
      for (Index j = 0; j < d; ++j) w.weights(m, j) = row[static_cast<std::size_t>(j)];
    }
    member = std::move(w);
  } else if (type == "filter") {
    FilterModel fm;
    fm.cost_c = c;
    fm.reg_lambda = reader.expect_double("lambda");
    reader.expect("stop_reason");
    fm.trace.inner_all_converged = reader.expect_int("converged") != 0;
    fm.model.bias = reader.expect_double("bias");
    const auto weights = reader.parse_row(reader.expect("weights"), static_cast<std::size_t>(d));
    fm.model.weights.resize(d);
    for (Index j = 0; j < d; ++j) fm.model.weights[j] = weights[static_cast<std::size_t>(j)];
    reader.expect("coeffs");
    Matrix coeffs(f, d);
    for (Index m = 0; m < f; ++m) {
      const auto row = reader.parse_row(reader.next_line(), static_cast<std::size_t>(d));
      for (Index j = 0; j < d; ++j) coeffs(m, j) = row[static_cast<std::size_t>(j)];
    }
    fm.filter = FilterBank(std::move(coeffs), n0);
    member = std::move(fm);
  } else {
    throw io_error(reader.path(), "unknown member type '" + type + "'");
  }
  if (reader.next_line() != "end") throw io_error(reader.path(), "expected 'end'");
  return member;
}

}  // namespace

void save_model(const std::string& path, const SequenceModel& model) {
  detail::require(!model.members.empty(), "save_model: empty model");
  detail::require(model.members.size() == model.classes.size(),
                  "save_model: class list and member count differ");
  std::ofstream out = open_out(path);
  out << "filtersvm-model " << kModelFormatVersion << "\n";
  out << "kind " << to_string(model.kind) << "\n";
  out << "multiclass " << (model.multiclass ? 1 : 0) << "\n";
  out << "members " << model.members.size() << "\n";
  for (std::size_t k = 0; k < model.members.size(); ++k)
    save_member(out, model.members[k], model.classes[k]);
  if (!out) throw io_error(path, "write failed");
}

SequenceModel load_model(const std::string& path) {
  std::ifstream in = open_in(path);
  ModelReader reader(in, path);

  const std::string tag = reader.next_line();
  if (tag.rfind("filtersvm-model ", 0) != 0)
    throw io_error(path, "not a filtersvm model file");
  const int version = static_cast<int>(parse_int(tag.substr(16), path, 1));
  if (version != kModelFormatVersion)
    throw io_error(path, "unsupported model format version " + std::to_string(version));

  SequenceModel model;
  model.kind = trainer_kind_from_string(reader.expect("kind"));
  model.multiclass = reader.expect_int("multiclass") != 0;
  const long n_members = reader.expect_int("members");
  if (n_members < 1) throw io_error(path, "model has no members");
  for (long k = 0; k < n_members; ++k) {
    int class_label = 0;
    model.members.push_back(load_member(reader, &class_label));
    model.classes.push_back(class_label);
  }
  return model;
}

Matrix member_map(const BinaryModel& member) {
  if (const auto* w = std::get_if<WindowModel>(&member)) return w->weights;
  return weighted_filter_map(std::get<FilterModel>(member));
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out = open_out(path);
  for (Index j = 0; j < m.cols(); ++j) {
    if (j > 0) out << ',';
    out << "ch" << (j + 1);
  }
  out << "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << "\n";
  }
  if (!out) throw io_error(path, "write failed");
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw io_error(path, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::size_t cols = split(line, ',').size();

  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (strip(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != cols)
      throw row_error(path, line_no, "ragged row");
    for (const auto& field : fields) values.push_back(parse_double(field, path, line_no));
    ++rows;
  }
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = values[i * cols + j];
  return m;
}

void write_key_value(const std::string& path, const KeyValueList& entries) {
  std::ofstream out = open_out(path);
  for (const auto& [key, value] : entries) out << key << "=" << value << "\n";
  if (!out) throw io_error(path, "write failed");
}

KeyValueList read_key_value(const std::string& path) {
  std::ifstream in = open_in(path);
  KeyValueList entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = strip(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw row_error(path, line_no, "expected key=value");
    entries.emplace_back(strip(stripped.substr(0, eq)), strip(stripped.substr(eq + 1)));
  }
  return entries;
}

void write_experiment_csv(const std::string& path, const ExperimentResult& result) {
  std::ofstream out = open_out(path);
  out << "sweep,method,mean_error,std_error,n_seeds\n";
  for (const auto& point : result.points) {
    out << format_double(point.sweep_value) << ',' << to_string(point.method) << ','
        << format_double(point.mean_error) << ',' << format_double(point.std_error) << ','
        << point.n_seeds << "\n";
  }
  if (!out) throw io_error(path, "write failed");
}

}  // namespace fsvm
