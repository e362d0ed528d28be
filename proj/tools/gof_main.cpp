// Command-line front end: single tests on data files, Monte-Carlo power
// sweeps from json configs, and the built-in figure reproductions.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gof/harness.hpp"

namespace {

using gof::Matrix;

Matrix read_data_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gof::DataError("cannot open data file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t used = 0;
        double v = std::stod(field, &used);
        while (used < field.size() &&
               std::isspace(static_cast<unsigned char>(field[used])))
          ++used;
        if (used != field.size()) throw std::invalid_argument(field);
        row.push_back(v);
      } catch (const std::exception&) {
        throw gof::DataError(path + ":" + std::to_string(lineno) +
                             ": not a number: " + field);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw gof::DataError(path + ":" + std::to_string(lineno) +
                           ": inconsistent column count");
    if (row.empty())
      throw gof::DataError(path + ":" + std::to_string(lineno) +
                           ": empty row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw gof::DataError(path + ": no data rows");
  Matrix X(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      X(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return X;
}

struct TestOptions {
  std::string method = "srpt";
  std::string data_path;
  std::string null_spec;
  std::string kernel = "gaussian";
  std::string regularizer = "tikhonov";
  double lambda = 0.01;
  std::vector<double> lambdas;
  double bandwidth = -1.0;
  std::vector<double> bandwidth_multipliers;
  double alpha = 0.05;
  int permutations = 60;
  int s = 100;
  int m = 0;
  double m_ratio = 3.0;
  double c1 = 65.0;
  int k_max = 1024;
  std::uint64_t seed = 1;
};

int run_test_cmd(const TestOptions& opt) {
  Matrix X = read_data_csv(opt.data_path);

  gof::ExperimentConfig config;
  config.null_dist = gof::parse_distribution(opt.null_spec);
  config.alt_dist = config.null_dist;
  config.n = static_cast<int>(X.rows());
  config.m = opt.m;
  config.m_ratio = opt.m_ratio;
  config.s = opt.s;
  config.alpha = opt.alpha;
  config.seed = opt.seed;

  if (X.cols() != config.null_dist.dim)
    throw gof::DataError("data has " + std::to_string(X.cols()) +
                         " columns but the null is " +
                         std::to_string(config.null_dist.dim) +
                         "-dimensional");

  gof::MethodSpec method;
  method.name = opt.method;
  method.kernel = opt.kernel;
  method.regularizer = opt.regularizer;
  method.lambda = opt.lambda;
  method.lambdas = opt.lambdas;
  method.bandwidth = opt.bandwidth;
  method.bandwidth_multipliers = opt.bandwidth_multipliers;
  method.permutations = opt.permutations;
  method.c1 = opt.c1;
  method.k_max = opt.k_max;
  config.methods = {method};

  int m_used = opt.m > 0
                   ? opt.m
                   : static_cast<int>(std::ceil(opt.m_ratio * config.n - 1e-9));
  gof::RngStream root(opt.seed);
  gof::RngStream x0_stream = root.substream(1);
  gof::RngStream y0_stream = root.substream(2);
  Matrix X0 = gof::sample(config.null_dist, m_used, x0_stream);
  Matrix Y0 = gof::sample(config.null_dist, config.s, y0_stream);

  gof::TestOutcome out = gof::run_single_test_outcome(
      method, config, X, X0, Y0, root.substream(100));

  nlohmann::json j;
  j["method"] = out.method;
  j["reject"] = out.reject;
  j["statistic"] = out.statistic;
  j["critical_value"] = out.critical_value;
  j["alpha"] = out.alpha;
  j["n"] = config.n;
  j["m"] = m_used;
  j["s"] = config.s;
  if (!out.per_grid.empty()) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& cell : out.per_grid) {
      nlohmann::json c;
      c["lambda"] = cell.lambda;
      c["kernel"] = cell.kernel;
      c["statistic"] = cell.statistic;
      c["critical_value"] = cell.critical_value;
      c["reject"] = cell.reject;
      cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct PowerOptions {
  std::string config_path;
  std::string out_path = "-";
  int reps = 0;
  int threads = 1;
  bool timing = false;
};

int run_power_cmd(const PowerOptions& opt) {
  gof::ExperimentConfig config = gof::load_experiment_config(opt.config_path);
  if (opt.reps > 0) config.reps = opt.reps;
  gof::PowerTable table = gof::run_experiment(config, opt.threads);
  if (opt.out_path == "-") {
    gof::write_power_csv(std::cout, table, opt.timing);
  } else {
    std::ofstream out(opt.out_path);
    if (!out) throw gof::DataError("cannot write " + opt.out_path);
    gof::write_power_csv(out, table, opt.timing);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral-regularized kernel goodness-of-fit tests"};
  app.require_subcommand(1);

  TestOptions topt;
  CLI::App* test_cmd =
      app.add_subcommand("test", "run one test on a csv data file");
  test_cmd->add_option("--method", topt.method,
                       "srct | srpt | srct-adaptive | srpt-adaptive | "
                       "oracle | mmd | energy-perm")
      ->required();
  test_cmd->add_option("--data", topt.data_path,
                       "csv file, one observation per row")
      ->required();
  test_cmd->add_option("--null", topt.null_spec,
                       "null distribution, e.g. gaussian:d=2 or uniform:d=1")
      ->required();
  test_cmd->add_option("--kernel", topt.kernel, "gaussian | spline");
  test_cmd->add_option("--regularizer", topt.regularizer,
                       "tikhonov | showalter");
  test_cmd->add_option("--lambda", topt.lambda, "regularization strength");
  test_cmd->add_option("--lambdas", topt.lambdas,
                       "grid for the adaptive rules (comma separated)")
      ->delimiter(',');
  test_cmd->add_option("--bandwidth", topt.bandwidth,
                       "gaussian bandwidth; <= 0 means median heuristic");
  test_cmd->add_option("--bandwidth-multipliers", topt.bandwidth_multipliers,
                       "bandwidth grid as multiples of the median heuristic")
      ->delimiter(',');
  test_cmd->add_option("--alpha", topt.alpha, "test level");
  test_cmd->add_option("--permutations,-B", topt.permutations,
                       "permutation count for the srpt family");
  test_cmd->add_option("--s", topt.s, "spectral calibration sample size");
  test_cmd->add_option("--m", topt.m, "null sample size (overrides m-ratio)");
  test_cmd->add_option("--m-ratio", topt.m_ratio, "null sample size as m/n");
  test_cmd->add_option("--c1", topt.c1, "srct concentration constant");
  test_cmd->add_option("--k-max", topt.k_max,
                       "frequency truncation for the oracle statistic");
  test_cmd->add_option("--seed", topt.seed,
                       "seed for null sampling and permutations");

  PowerOptions popt;
  CLI::App* power_cmd =
      app.add_subcommand("power", "monte-carlo power sweep from a json config");
  power_cmd->add_option("--config", popt.config_path, "json experiment config")
      ->required();
  power_cmd->add_option("--out", popt.out_path, "output csv path, - for stdout");
  power_cmd->add_option("--reps", popt.reps, "override replicate count");
  power_cmd->add_option("--threads", popt.threads, "worker threads");
  power_cmd->add_flag("--timing", popt.timing, "append a wall_s column");

  std::string figure_id;
  std::string out_dir = "figures";
  int rep_reps = 0;
  int rep_threads = 1;
  CLI::App* rep_cmd =
      app.add_subcommand("reproduce", "rerun a built-in experiment preset");
  std::string id_help = "one of:";
  for (const auto& id : gof::preset_ids()) id_help += " " + id;
  id_help += " (fig2, fig3 run all their dimensions)";
  rep_cmd->add_option("figure", figure_id, id_help)->required();
  rep_cmd->add_option("--out-dir", out_dir, "where to write csv and svg");
  rep_cmd->add_option("--reps", rep_reps, "override replicate count");
  rep_cmd->add_option("--threads", rep_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (test_cmd->parsed()) return run_test_cmd(topt);
    if (power_cmd->parsed()) return run_power_cmd(popt);
    if (rep_cmd->parsed()) {
      gof::reproduce(figure_id, out_dir, rep_reps, rep_threads);
      return 0;
    }
  } catch (const gof::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const gof::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
