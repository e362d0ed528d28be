#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gof/distributions.hpp"
#include "gof/tests.hpp"

namespace gof {

// One test procedure inside a power experiment.  `name` selects the
// decision rule: srct, srpt, srct-adaptive, srpt-adaptive, oracle, mmd,
// energy-perm.  Grid fields only apply to the adaptive rules; bandwidth <= 0
// means the median heuristic of the pooled replicate data.
struct MethodSpec {
  std::string name = "srpt";
  std::string kernel = "gaussian";         // gaussian | spline
  std::string regularizer = "tikhonov";    // tikhonov | showalter
  double lambda = 0.01;
  std::vector<double> lambdas;             // adaptive lambda grid
  double bandwidth = -1.0;                 // fixed bandwidth; <= 0 -> auto
  std::vector<double> bandwidth_multipliers;  // adaptive grid on h_median
  int permutations = 60;
  double c1 = 65.0;
  int k_max = 1024;
  double m_ratio = -1.0;  // per-method override of the config ratio
  std::string label;      // row label; defaults to `name`

  std::string effective_label() const { return label.empty() ? name : label; }
};

struct ExperimentConfig {
  DistributionSpec null_dist;
  DistributionSpec alt_dist;
  std::string sweep_param;           // perturbations|shift|scale|concentration|amplitude
  std::vector<double> sweep_values;  // empty -> single run of alt_dist as is
  std::vector<MethodSpec> methods;
  int n = 100;
  int m = -1;           // absolute override; otherwise ceil(m_ratio * n)
  double m_ratio = 3.0;
  int s = 100;
  int reps = 200;
  double alpha = 0.05;
  std::uint64_t seed = 1;
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);

struct PowerRow {
  double sweep = 0.0;
  std::string method;
  double rate = 0.0;  // rejection frequency
  double se = 0.0;    // sqrt(rate (1-rate) / reps)
  int reps = 0;
  double wall_s = 0.0;  // accumulated per-replicate wall time
};

struct PowerTable {
  std::vector<PowerRow> rows;
};

// Runs reps * |sweep| * |methods| tests.  Replicate r of sweep point v draws
// its data from substreams of (seed, v-index, r) only, so any thread count
// produces identical tables (wall_s aside).
PowerTable run_experiment(const ExperimentConfig& config, int threads = 1);

// Canonical CSV: "sweep,method,rate,se,reps" (+ ",wall_s" when timing is
// requested; timing is off by default so repeated runs are byte-identical).
void write_power_csv(std::ostream& os, const PowerTable& table,
                     bool include_timing = false);
PowerTable read_power_csv(std::istream& is);

// Minimal self-contained line chart of rate against sweep, one series per
// method label.
void write_power_svg(std::ostream& os, const PowerTable& table,
                     const std::string& title, const std::string& x_label);

// Single test replicate exactly as run_experiment executes it; exposed so
// a decision can be reproduced outside the harness loop.
bool run_single_test(const MethodSpec& method, const ExperimentConfig& config,
                     const Eigen::Ref<const Matrix>& X,
                     const Eigen::Ref<const Matrix>& X0,
                     const Eigen::Ref<const Matrix>& Y0, RngStream perm_stream);

// Same dispatch with the full outcome (statistic, threshold, grid cells).
TestOutcome run_single_test_outcome(const MethodSpec& method,
                                    const ExperimentConfig& config,
                                    const Eigen::Ref<const Matrix>& X,
                                    const Eigen::Ref<const Matrix>& X0,
                                    const Eigen::Ref<const Matrix>& Y0,
                                    RngStream perm_stream);

// Built-in experiment presets for the reproduction driver; valid ids are
// fig1 ... fig6 and fig4d2.
std::vector<std::string> preset_ids();
ExperimentConfig preset(const std::string& figure_id);

// Runs a preset and writes <id>.csv and <id>.svg into out_dir.  reps > 0
// overrides the preset's repetition count.
void reproduce(const std::string& figure_id, const std::string& out_dir,
               int reps = 0, int threads = 1);

}  // namespace gof
