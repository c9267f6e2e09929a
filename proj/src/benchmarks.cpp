#include "scamlgp/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "scamlgp/errors.hpp"
#include "scamlgp/optim.hpp"

namespace scamlgp {

namespace {

using nlohmann::json;

// Hartmann mixture centers and curvatures (shared across tasks; only the
// amplitudes alpha vary per task).
const Eigen::Matrix<double, 4, 3>& hartmann3_a() {
  static const Eigen::Matrix<double, 4, 3> a = [] {
    Eigen::Matrix<double, 4, 3> m;
    m << 3.0, 10.0, 30.0,
        0.1, 10.0, 35.0,
        3.0, 10.0, 30.0,
        0.1, 10.0, 35.0;
    return m;
  }();
  return a;
}

const Eigen::Matrix<double, 4, 3>& hartmann3_p() {
  static const Eigen::Matrix<double, 4, 3> p = [] {
    Eigen::Matrix<double, 4, 3> m;
    m << 3689.0, 1170.0, 2673.0,
        4699.0, 4387.0, 7470.0,
        1091.0, 8732.0, 5547.0,
        381.0, 5743.0, 8828.0;
    return Eigen::Matrix<double, 4, 3>(1e-4 * m);
  }();
  return p;
}

const Eigen::Matrix<double, 4, 6>& hartmann6_a() {
  static const Eigen::Matrix<double, 4, 6> a = [] {
    Eigen::Matrix<double, 4, 6> m;
    m << 10.0, 3.0, 17.0, 3.5, 1.7, 8.0,
        0.05, 10.0, 17.0, 0.1, 8.0, 14.0,
        3.0, 3.5, 1.7, 10.0, 17.0, 8.0,
        17.0, 8.0, 0.05, 10.0, 0.1, 14.0;
    return m;
  }();
  return a;
}

const Eigen::Matrix<double, 4, 6>& hartmann6_p() {
  static const Eigen::Matrix<double, 4, 6> p = [] {
    Eigen::Matrix<double, 4, 6> m;
    m << 1312.0, 1696.0, 5569.0, 124.0, 8283.0, 5886.0,
        2329.0, 4135.0, 8307.0, 3736.0, 1004.0, 9991.0,
        2348.0, 1451.0, 3522.0, 2883.0, 3047.0, 6650.0,
        4047.0, 8828.0, 8732.0, 5743.0, 1091.0, 381.0;
    return Eigen::Matrix<double, 4, 6>(1e-4 * m);
  }();
  return p;
}

template <int Cols>
double hartmann_sum(const Eigen::Vector4d& alpha, const Eigen::Matrix<double, 4, Cols>& a,
                    const Eigen::Matrix<double, 4, Cols>& p, const Eigen::VectorXd& x) {
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (int j = 0; j < Cols; ++j) {
      const double d = x[j] - p(i, j);
      inner += a(i, j) * d * d;
    }
    total -= alpha[i] * std::exp(-inner);
  }
  return total;
}

// Keeps the best-valued starts subject to a minimum separation, so several
// competitive basins all receive refinement.
class SeparatedTopK {
 public:
  SeparatedTopK(std::size_t capacity, double min_distance)
      : capacity_(capacity), min_distance_(min_distance) {}

  void offer(const Eigen::VectorXd& u, double value) {
    for (auto& [stored_u, stored_v] : entries_) {
      if ((stored_u - u).lpNorm<Eigen::Infinity>() < min_distance_) {
        if (value > stored_v) {
          stored_u = u;
          stored_v = value;
        }
        return;
      }
    }
    if (entries_.size() < capacity_) {
      entries_.emplace_back(u, value);
      return;
    }
    auto worst = std::min_element(entries_.begin(), entries_.end(),
                                  [](const auto& a, const auto& b) { return a.second < b.second; });
    if (value > worst->second) *worst = {u, value};
  }

  const std::vector<std::pair<Eigen::VectorXd, double>>& entries() const { return entries_; }

 private:
  std::size_t capacity_;
  double min_distance_;
  std::vector<std::pair<Eigen::VectorXd, double>> entries_;
};

double parse_strict_double(const std::string& text, const std::string& context) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || end != begin + text.size()) {
    throw ParseError(context + ": cannot parse number from '" + text + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(context + ": non-finite value '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace

Family family_from_name(const std::string& name) {
  if (name == "branin") return Family::kBranin;
  if (name == "hartmann3") return Family::kHartmann3;
  if (name == "hartmann6") return Family::kHartmann6;
  throw std::invalid_argument("unknown benchmark family '" + name + "'");
}

std::string family_name(Family family) {
  switch (family) {
    case Family::kBranin:
      return "branin";
    case Family::kHartmann3:
      return "hartmann3";
    case Family::kHartmann6:
      return "hartmann6";
  }
  return "";
}

Eigen::Index family_dim(Family family) {
  switch (family) {
    case Family::kBranin:
      return 2;
    case Family::kHartmann3:
      return 3;
    case Family::kHartmann6:
      return 6;
  }
  return 0;
}

void family_native_bounds(Family family, Eigen::VectorXd& lower, Eigen::VectorXd& upper) {
  const Eigen::Index d = family_dim(family);
  lower.resize(d);
  upper.resize(d);
  if (family == Family::kBranin) {
    lower << -5.0, 0.0;
    upper << 10.0, 15.0;
  } else {
    lower.setZero();
    upper.setOnes();
  }
}

Eigen::VectorXd family_to_native(Family family, const Eigen::VectorXd& unit) {
  Eigen::VectorXd lower, upper;
  family_native_bounds(family, lower, upper);
  if (unit.size() != lower.size()) {
    throw std::invalid_argument("family_to_native: dimension mismatch");
  }
  return lower.array() + unit.array() * (upper - lower).array();
}

BraninTask BraninTask::standard() {
  constexpr double pi = 3.14159265358979323846;
  return BraninTask{1.0, 5.1 / (4.0 * pi * pi), 5.0 / pi, 6.0, 10.0, 1.0 / (8.0 * pi)};
}

double branin_eval(const BraninTask& task, const Eigen::VectorXd& x_native) {
  if (x_native.size() != 2) throw std::invalid_argument("branin_eval: point must be 2-d");
  const double x1 = x_native[0];
  const double x2 = x_native[1];
  if (x1 < -5.0 || x1 > 10.0 || x2 < 0.0 || x2 > 15.0) {
    throw std::invalid_argument("branin_eval: point outside the native domain");
  }
  const double trend = x2 - task.b * x1 * x1 + task.c * x1 - task.r;
  return task.a * trend * trend + task.s * (1.0 - task.t) * std::cos(x1) + task.s;
}

BraninTask sample_branin_task(Rng& rng) {
  BraninTask task;
  task.a = rng.uniform(0.5, 1.5);
  task.b = rng.uniform(0.1, 0.15);
  task.c = rng.uniform(1.0, 2.0);
  task.r = rng.uniform(5.0, 7.0);
  task.s = rng.uniform(8.0, 12.0);
  task.t = rng.uniform(0.03, 0.05);
  return task;
}

HartmannTask HartmannTask::standard(int dim) {
  if (dim != 3 && dim != 6) throw std::invalid_argument("HartmannTask: dim must be 3 or 6");
  HartmannTask task;
  task.dim = dim;
  task.alpha << 1.0, 1.2, 3.0, 3.2;
  return task;
}

double hartmann_eval(const HartmannTask& task, const Eigen::VectorXd& x) {
  if (task.dim != 3 && task.dim != 6) {
    throw std::invalid_argument("hartmann_eval: dim must be 3 or 6");
  }
  if (x.size() != task.dim) throw std::invalid_argument("hartmann_eval: dimension mismatch");
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0 || x[i] > 1.0) {
      throw std::invalid_argument("hartmann_eval: point outside the unit cube");
    }
  }
  if (task.dim == 3) return hartmann_sum<3>(task.alpha, hartmann3_a(), hartmann3_p(), x);
  return hartmann_sum<6>(task.alpha, hartmann6_a(), hartmann6_p(), x);
}

HartmannTask sample_hartmann_task(int dim, Rng& rng) {
  if (dim != 3 && dim != 6) {
    throw std::invalid_argument("sample_hartmann_task: dim must be 3 or 6");
  }
  HartmannTask task;
  task.dim = dim;
  task.alpha[0] = rng.uniform(1.00, 1.02);
  task.alpha[1] = rng.uniform(1.18, 1.20);
  task.alpha[2] = rng.uniform(2.8, 3.0);
  task.alpha[3] = rng.uniform(3.2, 3.4);
  return task;
}

SyntheticTask standard_task(Family family) {
  SyntheticTask task;
  task.family = family;
  if (family == Family::kBranin) {
    task.params = BraninTask::standard();
  } else {
    task.params = HartmannTask::standard(static_cast<int>(family_dim(family)));
  }
  return task;
}

SyntheticTask sample_task(Family family, Rng& rng) {
  SyntheticTask task;
  task.family = family;
  if (family == Family::kBranin) {
    task.params = sample_branin_task(rng);
  } else {
    task.params = sample_hartmann_task(static_cast<int>(family_dim(family)), rng);
  }
  return task;
}

double synthetic_eval(const SyntheticTask& task, const Eigen::VectorXd& x_native) {
  if (task.family == Family::kBranin) {
    return branin_eval(std::get<BraninTask>(task.params), x_native);
  }
  return hartmann_eval(std::get<HartmannTask>(task.params), x_native);
}

MetaData generate_meta_data(Family family, const MetaDataSpec& spec) {
  if (spec.num_tasks < 0) {
    throw std::invalid_argument("generate_meta_data: num_tasks must be nonnegative");
  }
  if (spec.points_per_task < 1) {
    throw std::invalid_argument("generate_meta_data: points_per_task must be >= 1");
  }
  if (spec.noise_std < 0.0) {
    throw std::invalid_argument("generate_meta_data: noise_std must be nonnegative");
  }
  const Eigen::Index d = family_dim(family);
  const Rng root(spec.seed);

  MetaData result;
  result.tasks.reserve(static_cast<std::size_t>(spec.num_tasks));
  result.data.reserve(static_cast<std::size_t>(spec.num_tasks));
  for (int m = 0; m < spec.num_tasks; ++m) {
    const Rng task_rng = root.derive(static_cast<std::uint64_t>(m));
    Rng coeff_rng = task_rng.derive(0);
    Rng input_rng = task_rng.derive(1);
    Rng noise_rng = task_rng.derive(2);

    const SyntheticTask task = sample_task(family, coeff_rng);
    Eigen::MatrixXd inputs(spec.points_per_task, d);
    Eigen::VectorXd outputs(spec.points_per_task);
    for (int i = 0; i < spec.points_per_task; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) inputs(i, j) = input_rng.uniform();
      const double f = synthetic_eval(task, family_to_native(family, inputs.row(i).transpose()));
      const double noise = spec.noise_std > 0.0 ? spec.noise_std * noise_rng.normal() : 0.0;
      outputs[i] = -(f + noise);
    }
    result.tasks.push_back(task);
    result.data.emplace_back(std::move(inputs), std::move(outputs));
  }
  return result;
}

TrueMax true_maximum(const SyntheticTask& task, std::uint64_t refine_seed) {
  const Family family = task.family;
  const Eigen::Index d = family_dim(family);
  auto negated = [&](const Eigen::VectorXd& unit) {
    return -synthetic_eval(task, family_to_native(family, unit));
  };

  Rng jitter_rng = Rng(refine_seed).derive(0x5eedULL);
  SeparatedTopK starts(5, 0.05);

  if (d <= 3) {
    // Dense grid of at least 1e6 points, jittered by a sub-cell offset.
    const int per_axis = (d == 2) ? 1024 : 102;
    Eigen::VectorXd offset(d);
    for (Eigen::Index j = 0; j < d; ++j) offset[j] = jitter_rng.uniform();
    const double step = 1.0 / per_axis;
    Eigen::VectorXd u(d);
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (;;) {
      for (Eigen::Index j = 0; j < d; ++j) {
        u[j] = (static_cast<double>(idx[static_cast<std::size_t>(j)]) + offset[j] * 0.999) * step;
      }
      starts.offer(u, negated(u));
      Eigen::Index j = 0;
      for (; j < d; ++j) {
        if (++idx[static_cast<std::size_t>(j)] < per_axis) break;
        idx[static_cast<std::size_t>(j)] = 0;
      }
      if (j == d) break;
    }
  } else {
    SobolSequence sobol(static_cast<int>(d));
    sobol.skip(1009 * (refine_seed % 1024));
    for (int i = 0; i < 1000000; ++i) {
      const Eigen::VectorXd u = sobol.next();
      starts.offer(u, negated(u));
    }
  }

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(d);
  PatternSearchOptions ps;
  ps.initial_step = 0.01;
  ps.tol = 1e-8;

  TrueMax best;
  best.value = -std::numeric_limits<double>::infinity();
  for (const auto& [u0, coarse_value] : starts.entries()) {
    const Eigen::VectorXd refined = pattern_search_maximize(negated, u0, zero, one, ps);
    const double value = negated(refined);
    if (value > best.value) {
      best.value = value;
      best.x_native = family_to_native(family, refined);
    }
  }
  return best;
}

SobolSequence::SobolSequence(int dim) : dim_(dim) {
  if (dim < 1 || dim > 6) throw std::invalid_argument("SobolSequence: dim must be in 1..6");
  struct Poly {
    int s;
    std::uint32_t a;
    std::array<std::uint32_t, 4> m;
  };
  // Direction-number seeds for dimensions 2..6 (dimension 1 is van der
  // Corput); standard primitive-polynomial table.
  static const std::array<Poly, 5> kPolys = {{
      {1, 0, {1, 0, 0, 0}},
      {2, 1, {1, 3, 0, 0}},
      {3, 1, {1, 3, 1, 0}},
      {3, 2, {1, 1, 1, 0}},
      {4, 1, {1, 1, 3, 3}},
  }};

  direction_.resize(static_cast<std::size_t>(dim));
  state_.assign(static_cast<std::size_t>(dim), 0u);
  for (int k = 0; k < 32; ++k) direction_[0][static_cast<std::size_t>(k)] = 1u << (31 - k);
  for (int j = 1; j < dim; ++j) {
    const Poly& poly = kPolys[static_cast<std::size_t>(j - 1)];
    auto& v = direction_[static_cast<std::size_t>(j)];
    const int s = poly.s;
    for (int k = 0; k < s; ++k) {
      v[static_cast<std::size_t>(k)] = poly.m[static_cast<std::size_t>(k)] << (31 - k);
    }
    for (int k = s; k < 32; ++k) {
      std::uint32_t value = v[static_cast<std::size_t>(k - s)] ^
                            (v[static_cast<std::size_t>(k - s)] >> s);
      for (int i = 1; i <= s - 1; ++i) {
        if ((poly.a >> (s - 1 - i)) & 1u) value ^= v[static_cast<std::size_t>(k - i)];
      }
      v[static_cast<std::size_t>(k)] = value;
    }
  }
}

Eigen::VectorXd SobolSequence::next() {
  // Gray-code update: flip the direction of the lowest zero bit of index.
  int c = 0;
  std::uint64_t value = index_;
  while (value & 1u) {
    value >>= 1;
    ++c;
  }
  ++index_;
  Eigen::VectorXd point(dim_);
  for (int j = 0; j < dim_; ++j) {
    state_[static_cast<std::size_t>(j)] ^= direction_[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
    point[j] = static_cast<double>(state_[static_cast<std::size_t>(j)]) * 0x1.0p-32;
  }
  return point;
}

void SobolSequence::skip(std::uint64_t count) {
  for (std::uint64_t i = 0; i < count; ++i) next();
}

Eigen::MatrixXd TabularTask::unit_rows() const {
  Eigen::MatrixXd unit(rows.rows(), rows.cols());
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    const auto& lv = levels[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      const auto it = std::lower_bound(lv.begin(), lv.end(), rows(i, j));
      if (it == lv.end() || *it != rows(i, j)) {
        throw std::invalid_argument("unit_rows: value not present in the level list");
      }
      const auto rank = static_cast<double>(it - lv.begin());
      unit(i, j) = lv.size() > 1 ? rank / static_cast<double>(lv.size() - 1) : 0.5;
    }
  }
  return unit;
}

TabularTask load_tabular(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw IoError("load_tabular: cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(file, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError("load_tabular: '" + path + "' is empty");

  const std::vector<std::string> header = split_csv_line(lines[0]);
  if (header.size() < 2) {
    throw ParseError("load_tabular: header needs at least one parameter column and 'value'");
  }
  if (header.back() != "value") {
    throw ParseError("load_tabular: last header column must be 'value'");
  }
  TabularTask task;
  for (std::size_t j = 0; j + 1 < header.size(); ++j) {
    if (header[j].rfind("param:", 0) != 0 || header[j].size() <= 6) {
      throw ParseError("load_tabular: header column '" + header[j] +
                       "' must look like 'param:<name>'");
    }
    task.column_names.push_back(header[j].substr(6));
  }

  const Eigen::Index cols = static_cast<Eigen::Index>(task.column_names.size());
  const Eigen::Index n = static_cast<Eigen::Index>(lines.size()) - 1;
  if (n < 1) throw ParseError("load_tabular: no data rows");
  task.rows.resize(n, cols);
  task.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string context = "load_tabular: '" + path + "' line " + std::to_string(i + 2);
    const std::vector<std::string> fields = split_csv_line(lines[static_cast<std::size_t>(i + 1)]);
    if (static_cast<Eigen::Index>(fields.size()) != cols + 1) {
      throw ParseError(context + ": expected " + std::to_string(cols + 1) + " fields, got " +
                       std::to_string(fields.size()));
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      task.rows(i, j) = parse_strict_double(fields[static_cast<std::size_t>(j)], context);
    }
    task.values[i] = parse_strict_double(fields[static_cast<std::size_t>(cols)], context);
  }

  // Duplicate configurations make the lookup ill-defined.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  auto row_less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (task.rows(a, j) != task.rows(b, j)) return task.rows(a, j) < task.rows(b, j);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), row_less);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (!row_less(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i + 1)]) &&
        !row_less(order[static_cast<std::size_t>(i + 1)], order[static_cast<std::size_t>(i)])) {
      throw ParseError("load_tabular: duplicate parameter row in '" + path + "'");
    }
  }

  const std::string sidecar_path = path + ".meta.json";
  std::ifstream sidecar(sidecar_path);
  if (sidecar) {
    json doc;
    try {
      sidecar >> doc;
    } catch (const json::exception& err) {
      throw ParseError("load_tabular: bad sidecar '" + sidecar_path + "': " + err.what());
    }
    if (!doc.contains("columns") || !doc["columns"].is_array() ||
        doc["columns"].size() != task.column_names.size()) {
      throw ParseError("load_tabular: sidecar '" + sidecar_path +
                       "' must list one entry per parameter column");
    }
    for (std::size_t j = 0; j < task.column_names.size(); ++j) {
      const json& col = doc["columns"][j];
      if (!col.contains("name") || col["name"] != task.column_names[j]) {
        throw ParseError("load_tabular: sidecar column order does not match the header");
      }
      if (!col.contains("levels") || !col["levels"].is_array() || col["levels"].empty()) {
        throw ParseError("load_tabular: sidecar column '" + task.column_names[j] +
                         "' has no levels");
      }
      std::vector<double> lv = col["levels"].get<std::vector<double>>();
      if (!std::is_sorted(lv.begin(), lv.end()) ||
          std::adjacent_find(lv.begin(), lv.end()) != lv.end()) {
        throw ParseError("load_tabular: sidecar levels for '" + task.column_names[j] +
                         "' must be strictly ascending");
      }
      task.levels.push_back(std::move(lv));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        const auto& lv = task.levels[static_cast<std::size_t>(j)];
        if (!std::binary_search(lv.begin(), lv.end(), task.rows(i, j))) {
          throw ParseError("load_tabular: row value " + format_double(task.rows(i, j)) +
                           " missing from sidecar levels of '" + task.column_names[static_cast<std::size_t>(j)] + "'");
        }
      }
    }
  } else {
    for (Eigen::Index j = 0; j < cols; ++j) {
      std::vector<double> lv(task.rows.col(j).data(), task.rows.col(j).data() + n);
      std::sort(lv.begin(), lv.end());
      lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
      task.levels.push_back(std::move(lv));
    }
  }
  return task;
}

void save_tabular(const TabularTask& task, const std::string& path) {
  if (task.column_names.size() != static_cast<std::size_t>(task.dim()) ||
      task.levels.size() != static_cast<std::size_t>(task.dim()) ||
      task.values.size() != task.size()) {
    throw std::invalid_argument("save_tabular: inconsistent table");
  }
  std::ofstream file(path);
  if (!file) throw IoError("save_tabular: cannot open '" + path + "' for writing");
  for (const std::string& name : task.column_names) file << "param:" << name << ",";
  file << "value\n";
  for (Eigen::Index i = 0; i < task.size(); ++i) {
    for (Eigen::Index j = 0; j < task.dim(); ++j) file << format_double(task.rows(i, j)) << ",";
    file << format_double(task.values[i]) << "\n";
  }
  if (!file) throw IoError("save_tabular: write to '" + path + "' failed");

  json doc;
  doc["columns"] = json::array();
  for (std::size_t j = 0; j < task.column_names.size(); ++j) {
    doc["columns"].push_back(
        {{"name", task.column_names[j]}, {"levels", task.levels[j]}});
  }
  std::ofstream sidecar(path + ".meta.json");
  if (!sidecar) throw IoError("save_tabular: cannot open sidecar for writing");
  sidecar << doc.dump(2) << "\n";
  if (!sidecar) throw IoError("save_tabular: sidecar write failed");
}

std::vector<DataSet> subsample_meta_tabular(const std::vector<TabularTask>& tables,
                                            int points_per_task, Rng& rng) {
  if (points_per_task < 1) {
    throw std::invalid_argument("subsample_meta_tabular: points_per_task must be >= 1");
  }
  std::vector<DataSet> result;
  result.reserve(tables.size());
  for (const TabularTask& table : tables) {
    if (points_per_task > table.size()) {
      throw std::invalid_argument("subsample_meta_tabular: table with " +
                                  std::to_string(table.size()) + " rows cannot provide " +
                                  std::to_string(points_per_task) + " points");
    }
    const std::vector<int> picks =
        rng.sample_without_replacement(static_cast<int>(table.size()), points_per_task);
    const Eigen::MatrixXd unit = table.unit_rows();
    Eigen::MatrixXd inputs(points_per_task, table.dim());
    Eigen::VectorXd outputs(points_per_task);
    for (int i = 0; i < points_per_task; ++i) {
      inputs.row(i) = unit.row(picks[static_cast<std::size_t>(i)]);
      outputs[i] = table.values[picks[static_cast<std::size_t>(i)]];
    }
    result.emplace_back(std::move(inputs), std::move(outputs));
  }
  return result;
}

}  // namespace scamlgp
