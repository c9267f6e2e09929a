#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "scamlgp/gp.hpp"
#include "scamlgp/rng.hpp"

namespace scamlgp {

enum class Family { kBranin, kHartmann3, kHartmann6 };

Family family_from_name(const std::string& name);
std::string family_name(Family family);
Eigen::Index family_dim(Family family);
void family_native_bounds(Family family, Eigen::VectorXd& lower, Eigen::VectorXd& upper);
// Affine map from the unit cube to the native domain.
Eigen::VectorXd family_to_native(Family family, const Eigen::VectorXd& unit);

// Branin variant with a squared trend term:
//   f(x) = a (x2 - b x1^2 + c x1 - r)^2 + s (1 - t) cos(x1) + s
// over x1 in [-5, 10], x2 in [0, 15].
struct BraninTask {
  double a, b, c, r, s, t;
  static BraninTask standard();
};
double branin_eval(const BraninTask& task, const Eigen::VectorXd& x_native);
BraninTask sample_branin_task(Rng& rng);

// Hartmann family over the unit cube, dim 3 or 6, with per-task mixture
// amplitudes alpha: f(x) = -sum_i alpha_i exp(-sum_j A_ij (x_j - P_ij)^2).
struct HartmannTask {
  int dim = 3;
  Eigen::Vector4d alpha;
  static HartmannTask standard(int dim);
};
double hartmann_eval(const HartmannTask& task, const Eigen::VectorXd& x);
HartmannTask sample_hartmann_task(int dim, Rng& rng);

struct SyntheticTask {
  Family family = Family::kBranin;
  std::variant<BraninTask, HartmannTask> params;
};
SyntheticTask standard_task(Family family);
SyntheticTask sample_task(Family family, Rng& rng);
// Minimization value at a native-domain point.
double synthetic_eval(const SyntheticTask& task, const Eigen::VectorXd& x_native);

struct MetaDataSpec {
  int num_tasks = 8;
  int points_per_task = 32;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

struct MetaData {
  std::vector<SyntheticTask> tasks;
  std::vector<DataSet> data;  // unit-cube inputs, negated noisy outputs
};

// Draws one task per meta slot and evaluates noisy observations at uniform
// inputs. Outputs are negated so downstream BO always maximizes. Each task
// uses its own derived rng streams, so results do not depend on generation
// order.
MetaData generate_meta_data(Family family, const MetaDataSpec& spec);

struct TrueMax {
  Eigen::VectorXd x_native;
  double value;  // maximum of the negated objective
};

// Dense scan (grid for d <= 3, Sobol for d = 6) plus pattern-search
// refinement of the best separated candidates. refine_seed jitters the scan;
// the returned value is stable to about 1e-6 across seeds.
TrueMax true_maximum(const SyntheticTask& task, std::uint64_t refine_seed = 0);

// Gray-code Sobol sequence, dimensions 1 through 6.
class SobolSequence {
 public:
  explicit SobolSequence(int dim);
  Eigen::VectorXd next();
  void skip(std::uint64_t count);

 private:
  int dim_;
  std::uint64_t index_ = 0;
  std::vector<std::array<std::uint32_t, 32>> direction_;
  std::vector<std::uint32_t> state_;
};

// Finite lookup-table benchmark: one table of parameter configurations and
// their (maximization-oriented) objective values, plus the ordinal levels of
// each parameter for rank scaling.
struct TabularTask {
  std::vector<std::string> column_names;
  Eigen::MatrixXd rows;                     // original parameter values
  Eigen::VectorXd values;
  std::vector<std::vector<double>> levels;  // ascending per column

  Eigen::Index size() const { return rows.rows(); }
  Eigen::Index dim() const { return rows.cols(); }
  // Each level mapped to its rank in [0, 1]; single-level columns sit at 0.5.
  Eigen::MatrixXd unit_rows() const;
};

// CSV with header "param:<name>,...,value"; an optional "<path>.meta.json"
// sidecar pins the ordinal levels (otherwise they are derived as the sorted
// unique values present). Throws IoError when unreadable, ParseError when
// malformed (bad header, non-numeric cells, non-finite values, duplicate
// rows, sidecar mismatch).
TabularTask load_tabular(const std::string& path);
void save_tabular(const TabularTask& task, const std::string& path);

// Uniform subsample without replacement from each table in order; the
// resulting DataSets carry rank-scaled inputs and raw objective values.
std::vector<DataSet> subsample_meta_tabular(const std::vector<TabularTask>& tables,
                                            int points_per_task, Rng& rng);

}  // namespace scamlgp
