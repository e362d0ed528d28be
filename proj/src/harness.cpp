#include "gof/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace gof {

namespace {

using nlohmann::json;

[[noreturn]] void config_fail(const std::string& msg) {
  throw ConfigError(msg);
}

void apply_sweep(DistributionSpec& spec, const std::string& param,
                 double value) {
  if (param == "perturbations") {
    double r = std::round(value);
    if (std::abs(r - value) > 1e-9 || r < 1.0)
      config_fail("sweep over perturbations needs integer values >= 1");
    spec.perturbations = static_cast<int>(r);
  } else if (param == "shift") {
    spec.shift = value;
  } else if (param == "scale") {
    spec.scale = value;
  } else if (param == "concentration") {
    spec.concentration = value;
  } else if (param == "amplitude") {
    spec.amplitude = value;
  } else {
    config_fail("unknown sweep parameter: " + param);
  }
}

int resolve_m(const MethodSpec& method, const ExperimentConfig& config) {
  if (config.m > 0) return config.m;
  double ratio = method.m_ratio > 0.0 ? method.m_ratio : config.m_ratio;
  if (ratio < 1.0)
    config_fail("m_ratio must be >= 1 so the null sample is no smaller "
                "than the data");
  return static_cast<int>(std::ceil(ratio * config.n - 1e-9));
}

Regularizer resolve_regularizer(const MethodSpec& m) {
  if (m.regularizer == "tikhonov") return Regularizer::tikhonov();
  if (m.regularizer == "showalter") return Regularizer::showalter();
  config_fail("unknown regularizer: " + m.regularizer);
}

// Single kernel for the non-adaptive rules.
Kernel resolve_kernel(const MethodSpec& method,
                      const Eigen::Ref<const Matrix>& X,
                      const Eigen::Ref<const Matrix>& X0) {
  if (method.kernel == "spline") return Kernel::periodic_spline(1);
  if (method.kernel != "gaussian")
    config_fail("unknown kernel family: " + method.kernel);
  double h = method.bandwidth > 0.0 ? method.bandwidth
                                    : median_heuristic(X, X0);
  return Kernel::gaussian(h);
}

std::vector<Kernel> resolve_kernel_grid(const MethodSpec& method,
                                        const Eigen::Ref<const Matrix>& X,
                                        const Eigen::Ref<const Matrix>& X0) {
  if (method.kernel == "spline") return {Kernel::periodic_spline(1)};
  if (method.kernel != "gaussian")
    config_fail("unknown kernel family: " + method.kernel);
  double h = method.bandwidth > 0.0 ? method.bandwidth
                                    : median_heuristic(X, X0);
  std::vector<Kernel> out;
  if (method.bandwidth_multipliers.empty()) {
    out.push_back(Kernel::gaussian(h));
  } else {
    for (double w : method.bandwidth_multipliers)
      out.push_back(Kernel::gaussian(w * h));
  }
  return out;
}

std::vector<double> resolve_lambda_grid(const MethodSpec& method) {
  if (!method.lambdas.empty()) return method.lambdas;
  return doubling_grid(1e-6, 5.0);
}

}  // namespace

TestOutcome run_single_test_outcome(const MethodSpec& method,
                                    const ExperimentConfig& config,
                                    const Eigen::Ref<const Matrix>& X,
                                    const Eigen::Ref<const Matrix>& X0,
                                    const Eigen::Ref<const Matrix>& Y0,
                                    RngStream perm_stream) {
  const double alpha = config.alpha;
  PermutationPlan plan{method.permutations, perm_stream};

  if (method.name == "oracle") {
    Regularizer reg = resolve_regularizer(method);
    return oracle_test(X, reg, method.lambda, alpha, spline_spectrum(1),
                       method.k_max);
  }
  if (method.name == "mmd") {
    Kernel kernel = resolve_kernel(method, X, X0);
    return mmd_test(X, kernel, closed_form_null(kernel, config.null_dist),
                    alpha);
  }
  if (method.name == "energy-perm")
    return energy_perm_test(X, X0, alpha, plan);

  Regularizer reg = resolve_regularizer(method);
  if (method.name == "srct") {
    Kernel kernel = resolve_kernel(method, X, X0);
    return srct(X, X0, Y0, kernel, reg, method.lambda, alpha, method.c1);
  }
  if (method.name == "srpt") {
    Kernel kernel = resolve_kernel(method, X, X0);
    return srpt(X, X0, Y0, kernel, reg, method.lambda, alpha, plan);
  }
  if (method.name == "srct-adaptive") {
    Kernel kernel = resolve_kernel(method, X, X0);
    return adaptive_srct(X, X0, Y0, kernel, reg, resolve_lambda_grid(method),
                         alpha, method.c1);
  }
  if (method.name == "srpt-adaptive") {
    auto kernels = resolve_kernel_grid(method, X, X0);
    return adaptive_srpt(X, X0, Y0, kernels, reg, resolve_lambda_grid(method),
                         alpha, plan);
  }
  config_fail("unknown method: " + method.name);
}

bool run_single_test(const MethodSpec& method, const ExperimentConfig& config,
                     const Eigen::Ref<const Matrix>& X,
                     const Eigen::Ref<const Matrix>& X0,
                     const Eigen::Ref<const Matrix>& Y0,
                     RngStream perm_stream) {
  return run_single_test_outcome(method, config, X, X0, Y0, perm_stream)
      .reject;
}

PowerTable run_experiment(const ExperimentConfig& config, int threads) {
  if (config.n < 2) config_fail("n must be >= 2");
  if (config.s < 2) config_fail("s must be >= 2");
  if (config.reps < 1) config_fail("reps must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0))
    config_fail("alpha must lie in (0,1)");
  if (config.methods.empty()) config_fail("no methods configured");
  if (config.m > 0 && config.m < config.n)
    config_fail("explicit m must be >= n");

  int m_max = 2;
  for (const auto& method : config.methods)
    m_max = std::max(m_max, resolve_m(method, config));

  std::vector<double> sweeps =
      config.sweep_values.empty() ? std::vector<double>{0.0}
                                  : config.sweep_values;
  if (!config.sweep_values.empty() && config.sweep_param.empty())
    config_fail("sweep values given without a sweep parameter");

  const int R = config.reps;
  const int M = static_cast<int>(config.methods.size());
  if (threads < 1) threads = 1;
  threads = std::min<int>(threads, R);

  PowerTable table;
  for (std::size_t si = 0; si < sweeps.size(); ++si) {
    DistributionSpec alt = config.alt_dist;
    if (!config.sweep_param.empty())
      apply_sweep(alt, config.sweep_param, sweeps[si]);
    // fail fast on invalid sweep points before spawning workers
    (void)alt.label();

    std::vector<std::vector<std::uint8_t>> rejects(
        M, std::vector<std::uint8_t>(R, 0));
    std::vector<std::vector<double>> walls(M, std::vector<double>(R, 0.0));

    auto run_rep = [&](int r) {
      RngStream rep_stream =
          RngStream(config.seed).substream(si).substream(r);
      RngStream xs = rep_stream.substream(0);
      RngStream x0s = rep_stream.substream(1);
      RngStream y0s = rep_stream.substream(2);
      Matrix X = sample(alt, config.n, xs);
      Matrix X0 = sample(config.null_dist, m_max, x0s);
      Matrix Y0 = sample(config.null_dist, config.s, y0s);
      for (int mi = 0; mi < M; ++mi) {
        const MethodSpec& method = config.methods[mi];
        int m_used = resolve_m(method, config);
        auto t0 = std::chrono::steady_clock::now();
        bool rej = run_single_test(method, config, X, X0.topRows(m_used), Y0,
                                   rep_stream.substream(100 + mi));
        auto t1 = std::chrono::steady_clock::now();
        rejects[mi][r] = rej ? 1 : 0;
        walls[mi][r] = std::chrono::duration<double>(t1 - t0).count();
      }
    };

    if (threads == 1) {
      for (int r = 0; r < R; ++r) run_rep(r);
    } else {
      std::atomic<int> next{0};
      std::vector<std::thread> pool;
      std::exception_ptr error;
      std::mutex error_mutex;
      for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
          for (;;) {
            int r = next.fetch_add(1);
            if (r >= R) return;
            try {
              run_rep(r);
            } catch (...) {
              std::lock_guard<std::mutex> lock(error_mutex);
              if (!error) error = std::current_exception();
              return;
            }
          }
        });
      for (auto& th : pool) th.join();
      if (error) std::rethrow_exception(error);
    }

    for (int mi = 0; mi < M; ++mi) {
      int count = 0;
      double wall = 0.0;
      for (int r = 0; r < R; ++r) {
        count += rejects[mi][r];
        wall += walls[mi][r];
      }
      PowerRow row;
      row.sweep = sweeps[si];
      row.method = config.methods[mi].effective_label();
      row.rate = static_cast<double>(count) / R;
      row.se = std::sqrt(row.rate * (1.0 - row.rate) / R);
      row.reps = R;
      row.wall_s = wall;
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

void write_power_csv(std::ostream& os, const PowerTable& table,
                     bool include_timing) {
  os << "sweep,method,rate,se,reps";
  if (include_timing) os << ",wall_s";
  os << "\n";
  char buf[160];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof(buf), "%.10g,%s,%.6f,%.6f,%d", row.sweep,
                  row.method.c_str(), row.rate, row.se, row.reps);
    os << buf;
    if (include_timing) {
      std::snprintf(buf, sizeof(buf), ",%.3f", row.wall_s);
      os << buf;
    }
    os << "\n";
  }
}

PowerTable read_power_csv(std::istream& is) {
  PowerTable table;
  std::string line;
  if (!std::getline(is, line)) throw DataError("power csv: empty input");
  bool timing = line == "sweep,method,rate,se,reps,wall_s";
  if (!timing && line != "sweep,method,rate,se,reps")
    throw DataError("power csv: unrecognized header: " + line);
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != (timing ? 6u : 5u))
      throw DataError("power csv: wrong field count on line " +
                      std::to_string(lineno));
    try {
      PowerRow row;
      row.sweep = std::stod(fields[0]);
      row.method = fields[1];
      row.rate = std::stod(fields[2]);
      row.se = std::stod(fields[3]);
      row.reps = std::stoi(fields[4]);
      row.wall_s = timing ? std::stod(fields[5]) : 0.0;
      table.rows.push_back(std::move(row));
    } catch (const std::exception&) {
      throw DataError("power csv: malformed line " + std::to_string(lineno));
    }
  }
  return table;
}

void write_power_svg(std::ostream& os, const PowerTable& table,
                     const std::string& title, const std::string& x_label) {
  const double W = 720, H = 480;
  const double left = 70, right = 40, top = 50, bottom = 60;
  const double plot_w = W - left - right, plot_h = H - top - bottom;

  std::vector<std::string> methods;
  double x_min = 0, x_max = 1;
  bool first = true;
  for (const auto& row : table.rows) {
    if (std::find(methods.begin(), methods.end(), row.method) == methods.end())
      methods.push_back(row.method);
    if (first || row.sweep < x_min) x_min = row.sweep;
    if (first || row.sweep > x_max) x_max = row.sweep;
    first = false;
  }
  if (first) throw DataError("power svg: empty table");
  if (x_max <= x_min) x_max = x_min + 1.0;

  auto px = [&](double x) {
    return left + (x - x_min) / (x_max - x_min) * plot_w;
  };
  auto py = [&](double y) { return top + (1.0 - y) * plot_h; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#17becf"};
  char buf[256];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">"
     << title << "</text>\n";

  // axes and ticks
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                "stroke=\"black\"/>\n",
                left, top + plot_h, left + plot_w, top + plot_h);
  os << buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                "stroke=\"black\"/>\n",
                left, top, left, top + plot_h);
  os << buf;
  for (int i = 0; i <= 4; ++i) {
    double y = 0.25 * i;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"#cccccc\"/>\n",
                  left, py(y), left + plot_w, py(y));
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" "
                  "font-family=\"sans-serif\" font-size=\"12\">%.2f</text>\n",
                  left - 8, py(y) + 4, y);
    os << buf;
  }
  std::vector<double> xticks;
  for (const auto& row : table.rows)
    if (std::find(xticks.begin(), xticks.end(), row.sweep) == xticks.end())
      xticks.push_back(row.sweep);
  std::sort(xticks.begin(), xticks.end());
  for (double x : xticks) {
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"black\"/>\n",
                  px(x), top + plot_h, px(x), top + plot_h + 5);
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" "
                  "font-family=\"sans-serif\" font-size=\"12\">%.4g</text>\n",
                  px(x), top + plot_h + 20, x);
    os << buf;
  }
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << H - 14
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\">"
     << x_label << "</text>\n";
  os << "<text x=\"20\" y=\"" << top + plot_h / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\" transform=\"rotate(-90 20 "
     << top + plot_h / 2 << ")\">rejection rate</text>\n";

  // one polyline + markers per method
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const char* color = palette[mi % 7];
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : table.rows)
      if (row.method == methods[mi]) pts.push_back({row.sweep, row.rate});
    std::sort(pts.begin(), pts.end());
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : pts) {
      std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", px(x), py(y));
      os << buf;
    }
    os << "\"/>\n";
    for (const auto& [x, y] : pts) {
      std::snprintf(buf, sizeof(buf),
                    "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"3\" fill=\"%s\"/>\n",
                    px(x), py(y), color);
      os << buf;
    }
    double ly = top + 16 + 18 * static_cast<double>(mi);
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"%s\" stroke-width=\"2\"/>\n",
                  left + plot_w - 150, ly - 4, left + plot_w - 122, ly - 4,
                  color);
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                  "font-size=\"12\">%s</text>\n",
                  left + plot_w - 116, ly, methods[mi].c_str());
    os << buf;
  }
  os << "</svg>\n";
}

namespace {

std::vector<double> parse_grid_json(const json& j, const char* what) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) out.push_back(v.get<double>());
    if (out.empty()) config_fail(std::string(what) + ": empty grid");
    return out;
  }
  if (j.is_object() && j.contains("lo") && j.contains("hi"))
    return doubling_grid(j.at("lo").get<double>(), j.at("hi").get<double>());
  config_fail(std::string(what) +
              ": expected an array or {\"lo\":..., \"hi\":...}");
}

MethodSpec parse_method_json(const json& jm) {
  static const std::vector<std::string> known = {
      "name",       "kernel", "regularizer", "lambda",  "lambdas",
      "bandwidth",  "bandwidths", "permutations", "c1", "k_max",
      "m_ratio",    "label"};
  for (auto it = jm.begin(); it != jm.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      config_fail("unknown method field: " + it.key());

  MethodSpec m;
  m.name = jm.at("name").get<std::string>();
  if (jm.contains("kernel")) m.kernel = jm.at("kernel").get<std::string>();
  if (jm.contains("regularizer"))
    m.regularizer = jm.at("regularizer").get<std::string>();
  if (jm.contains("lambda")) m.lambda = jm.at("lambda").get<double>();
  if (jm.contains("lambdas"))
    m.lambdas = parse_grid_json(jm.at("lambdas"), "lambdas");
  if (jm.contains("bandwidth")) {
    const auto& b = jm.at("bandwidth");
    if (b.is_string()) {
      if (b.get<std::string>() != "auto")
        config_fail("bandwidth: expected a number or \"auto\"");
      m.bandwidth = -1.0;
    } else {
      m.bandwidth = b.get<double>();
    }
  }
  if (jm.contains("bandwidths"))
    m.bandwidth_multipliers =
        parse_grid_json(jm.at("bandwidths"), "bandwidths");
  if (jm.contains("permutations"))
    m.permutations = jm.at("permutations").get<int>();
  if (jm.contains("c1")) m.c1 = jm.at("c1").get<double>();
  if (jm.contains("k_max")) m.k_max = jm.at("k_max").get<int>();
  if (jm.contains("m_ratio")) m.m_ratio = jm.at("m_ratio").get<double>();
  if (jm.contains("label")) m.label = jm.at("label").get<std::string>();
  if (m.label.find(',') != std::string::npos)
    config_fail("method label must not contain commas");
  return m;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    config_fail(std::string("config is not valid json: ") + e.what());
  }
  try {
    static const std::vector<std::string> known = {
        "null", "alternative", "sweep", "method", "methods",
        "n",    "m",           "m_ratio", "s",    "reps",
        "alpha", "seed"};
    for (auto it = j.begin(); it != j.end(); ++it)
      if (std::find(known.begin(), known.end(), it.key()) == known.end())
        config_fail("unknown config field: " + it.key());

    ExperimentConfig config;
    config.null_dist = parse_distribution(j.at("null").get<std::string>());
    config.alt_dist =
        parse_distribution(j.at("alternative").get<std::string>());
    if (j.contains("sweep")) {
      config.sweep_param = j.at("sweep").at("param").get<std::string>();
      for (const auto& v : j.at("sweep").at("values"))
        config.sweep_values.push_back(v.get<double>());
    }
    if (j.contains("methods")) {
      for (const auto& jm : j.at("methods"))
        config.methods.push_back(parse_method_json(jm));
    }
    if (j.contains("method"))
      config.methods.push_back(parse_method_json(j.at("method")));
    if (config.methods.empty()) config_fail("no methods configured");
    if (j.contains("n")) config.n = j.at("n").get<int>();
    if (j.contains("m")) config.m = j.at("m").get<int>();
    if (j.contains("m_ratio")) config.m_ratio = j.at("m_ratio").get<double>();
    if (j.contains("s")) config.s = j.at("s").get<int>();
    if (j.contains("reps")) config.reps = j.at("reps").get<int>();
    if (j.contains("alpha")) config.alpha = j.at("alpha").get<double>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    return config;
  } catch (const json::exception& e) {
    config_fail(std::string("bad config structure: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

namespace {

MethodSpec preset_srpt_adaptive_small(const std::string& reg) {
  MethodSpec m;
  m.name = "srpt-adaptive";
  m.kernel = "gaussian";
  m.regularizer = reg;
  m.lambdas = {1e-4, 1e-2, 1.0};
  m.bandwidth_multipliers = {1.0};
  m.permutations = 60;
  m.label = "srpt";
  return m;
}

MethodSpec preset_mmd() {
  MethodSpec m;
  m.name = "mmd";
  m.kernel = "gaussian";
  m.label = "mmd";
  return m;
}

MethodSpec preset_energy() {
  MethodSpec m;
  m.name = "energy-perm";
  m.permutations = 60;
  m.label = "energy";
  return m;
}

ExperimentConfig fig1_config() {
  ExperimentConfig c;
  c.null_dist = parse_distribution("uniform:d=1");
  c.alt_dist = parse_distribution("perturbed_uniform:d=1");
  c.sweep_param = "perturbations";
  c.sweep_values = {1, 2, 3};
  c.n = 1200;
  c.m_ratio = 3.0;
  c.s = 100;
  c.reps = 200;
  c.alpha = 0.05;
  c.seed = 101;

  // strong-signal regime: the exact-spectrum threshold saturates over the
  // whole sweep, which is what the oracle-vs-permutation comparison is about
  const double lambda = 0.001;
  MethodSpec oracle;
  oracle.name = "oracle";
  oracle.kernel = "spline";
  oracle.lambda = lambda;
  oracle.label = "oracle";

  MethodSpec srpt3;
  srpt3.name = "srpt";
  srpt3.kernel = "spline";
  srpt3.lambda = lambda;
  srpt3.permutations = 60;
  srpt3.m_ratio = 3.0;
  srpt3.label = "srpt-m3n";

  MethodSpec srpt1 = srpt3;
  srpt1.m_ratio = 1.0;
  srpt1.label = "srpt-mn";

  c.methods = {oracle, srpt3, srpt1};
  return c;
}

ExperimentConfig fig2_config(int d) {
  ExperimentConfig c;
  c.null_dist = parse_distribution("gaussian:d=" + std::to_string(d));
  c.alt_dist = parse_distribution("gaussian:d=" + std::to_string(d));
  c.sweep_param = "shift";
  c.sweep_values = {0.0, 0.25, 0.5, 0.75, 1.0};
  c.n = 200;
  c.m_ratio = 3.0;
  c.s = 100;
  c.reps = 200;
  c.alpha = 0.05;
  c.seed = 102;
  c.methods = {preset_srpt_adaptive_small("showalter"), preset_mmd(),
               preset_energy()};
  return c;
}

ExperimentConfig fig3_config(int d) {
  ExperimentConfig c = fig2_config(d);
  c.sweep_param = "scale";
  c.sweep_values = {1.0, 1.25, 1.5, 2.0, 3.0};
  c.seed = 103;
  return c;
}

ExperimentConfig fig4_config(int d) {
  ExperimentConfig c;
  c.null_dist = parse_distribution("uniform:d=" + std::to_string(d));
  c.alt_dist = parse_distribution("perturbed_uniform:d=" + std::to_string(d));
  c.sweep_param = "perturbations";
  c.sweep_values = {1, 2, 3, 4, 5, 6};
  c.n = d == 1 ? 500 : 2000;
  c.m_ratio = 3.0;
  c.s = 100;
  c.reps = 200;
  c.alpha = 0.05;
  c.seed = 104;

  MethodSpec srpt;
  srpt.name = "srpt-adaptive";
  srpt.kernel = "gaussian";
  srpt.regularizer = "tikhonov";
  srpt.lambdas = {1e-4, 1e-2, 1.0};
  // a grid of perturbation cells needs bandwidths well below the median
  // heuristic before the kernel can resolve them
  srpt.bandwidth_multipliers = {0.02, 0.1, 0.5};
  // smallest count that keeps every Bonferroni cell rejectable at 0.05/9
  srpt.permutations = 180;
  srpt.label = "srpt-adaptive";

  c.methods = {srpt, preset_mmd()};
  return c;
}

ExperimentConfig fig5_config() {
  ExperimentConfig c;
  c.null_dist = parse_distribution("sphere_uniform:d=3");
  c.alt_dist = parse_distribution("vmf:d=3");
  c.sweep_param = "concentration";
  c.sweep_values = {0.0, 0.25, 0.5, 1.0, 2.0};
  c.n = 500;
  c.m_ratio = 3.0;
  c.s = 100;
  c.reps = 200;
  c.alpha = 0.05;
  c.seed = 105;
  c.methods = {preset_srpt_adaptive_small("tikhonov"), preset_energy()};
  return c;
}

ExperimentConfig fig6_config() {
  ExperimentConfig c = fig5_config();
  c.alt_dist = parse_distribution("watson_mixture:d=3");
  c.sweep_values = {0.0, 1.0, 2.0, 4.0, 8.0};
  c.seed = 106;
  return c;
}

}  // namespace

std::vector<std::string> preset_ids() {
  return {"fig1",   "fig2d1", "fig2d5", "fig2d10", "fig3d1", "fig3d5",
          "fig3d10", "fig4",   "fig4d2", "fig5",    "fig6"};
}

ExperimentConfig preset(const std::string& figure_id) {
  if (figure_id == "fig1") return fig1_config();
  if (figure_id == "fig2d1") return fig2_config(1);
  if (figure_id == "fig2d5") return fig2_config(5);
  if (figure_id == "fig2d10") return fig2_config(10);
  if (figure_id == "fig3d1") return fig3_config(1);
  if (figure_id == "fig3d5") return fig3_config(5);
  if (figure_id == "fig3d10") return fig3_config(10);
  if (figure_id == "fig4") return fig4_config(1);
  if (figure_id == "fig4d2") return fig4_config(2);
  if (figure_id == "fig5") return fig5_config();
  if (figure_id == "fig6") return fig6_config();
  config_fail("unknown figure id: " + figure_id +
              " (expected fig1..fig6, fig2d<d>, fig3d<d>, fig4d2)");
}

void reproduce(const std::string& figure_id, const std::string& out_dir,
               int reps, int threads) {
  std::vector<std::string> parts;
  std::string x_label = "sweep";
  if (figure_id == "fig2") {
    parts = {"fig2d1", "fig2d5", "fig2d10"};
  } else if (figure_id == "fig3") {
    parts = {"fig3d1", "fig3d5", "fig3d10"};
  } else {
    parts = {figure_id};
  }

  PowerTable merged;
  for (const auto& id : parts) {
    ExperimentConfig config = preset(id);
    if (reps > 0) config.reps = reps;
    x_label = config.sweep_param;
    PowerTable t = run_experiment(config, threads);
    for (auto& row : t.rows) {
      if (parts.size() > 1)
        row.method += ":d=" + std::to_string(config.alt_dist.dim);
      merged.rows.push_back(std::move(row));
    }
  }

  std::filesystem::create_directories(out_dir);
  auto base = std::filesystem::path(out_dir) / figure_id;
  {
    std::ofstream csv(base.string() + ".csv");
    if (!csv) throw DataError("cannot write " + base.string() + ".csv");
    write_power_csv(csv, merged);
  }
  {
    std::ofstream svg(base.string() + ".svg");
    if (!svg) throw DataError("cannot write " + base.string() + ".svg");
    write_power_svg(svg, merged, figure_id, x_label);
  }
  std::cout << "wrote " << base.string() << ".csv and " << base.string()
            << ".svg\n";
}

}  // namespace gof
