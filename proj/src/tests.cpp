#include "gof/tests.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

namespace gof {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw ConfigError("alpha must lie in (0,1)");
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ConfigError("lambda must be positive");
}

// p-value of the observed statistic within its permutation ensemble; ties
// count toward the permuted side, which keeps the test conservative.
double permutation_pvalue(double observed, const std::vector<double>& permuted) {
  int ge = 0;
  for (double v : permuted)
    if (v >= observed) ++ge;
  return static_cast<double>(1 + ge) / (permuted.size() + 1);
}

// Smallest value the observed statistic must exceed to be rejected, i.e. the
// floor(alpha (B+1))-th largest permuted value; +inf when no rejection is
// possible at this ensemble size.
double permutation_critical(std::vector<double> permuted, double alpha) {
  int B = static_cast<int>(permuted.size());
  int k = static_cast<int>(std::floor(alpha * (B + 1)));
  if (k < 1) return std::numeric_limits<double>::infinity();
  std::nth_element(permuted.begin(), permuted.begin() + (k - 1),
                   permuted.end(), std::greater<double>());
  return permuted[k - 1];
}

std::vector<std::vector<int>> make_permutations(const PermutationPlan& plan,
                                                int size) {
  if (plan.count < 1) throw ConfigError("permutation count must be >= 1");
  std::vector<std::vector<int>> perms;
  perms.reserve(plan.count);
  for (int b = 1; b <= plan.count; ++b) {
    RngStream s = plan.stream.substream(b);
    perms.push_back(s.permutation(size));
  }
  return perms;
}

void check_split_sizes(Eigen::Index n, Eigen::Index m, Eigen::Index s) {
  if (n < 2 || m < 2) throw DataError("need n >= 2 and m >= 2");
  if (s < 2) throw DataError("need s >= 2 covariance samples");
}

}  // namespace

double b1_constant(double c1) {
  if (!(c1 >= 65.0))
    throw ConfigError("c1 must be >= 65 for a real-valued threshold constant");
  double v = 4.0 / 9.0 - 16.0 / (3.0 * std::sqrt(3.0 * c1)) - 32.0 / (9.0 * c1);
  return std::sqrt(v);
}

PooledStatEvaluator::PooledStatEvaluator(const Kernel& kernel,
                                         const Regularizer& reg,
                                         const Eigen::Ref<const Matrix>& pooled,
                                         int n, int m,
                                         const Eigen::Ref<const Matrix>& Y0,
                                         std::vector<double> lambdas)
    : n_(n), m_(m), lambdas_(std::move(lambdas)) {
  if (pooled.rows() != n + m)
    throw DataError("pooled sample must have n + m rows");
  check_split_sizes(n, m, Y0.rows());
  if (lambdas_.empty()) throw ConfigError("lambda grid must be nonempty");
  for (double l : lambdas_) check_lambda(l);

  const double kappa = kernel.bound();
  const Eigen::Index s = Y0.rows();

  K_U_ = kernel.gram(pooled, pooled);
  Matrix K_Us = kernel.gram(pooled, Y0);
  es_ = centered_eigensystem(kernel.gram(Y0, Y0), kappa);

  // Z = K_Us Ht^{1/2} V; with it every Gram-side G term becomes a weighted
  // column sum
  Matrix HV = es_.vectors;
  HV.rowwise() -= es_.vectors.colwise().mean();
  HV *= std::sqrt(static_cast<double>(s) / (s - 1.0));
  Z_ = K_Us * HV;
  Zsq_ = Z_.cwiseProduct(Z_);

  rowsum_ = K_U_.rowwise().sum();
  total_ = rowsum_.sum();
  trace_ = K_U_.trace();
  zsum_ = Z_.colwise().sum().transpose();
  zsqsum_ = Zsq_.colwise().sum().transpose();

  g0_.reserve(lambdas_.size());
  ratios_.reserve(lambdas_.size());
  for (double l : lambdas_) {
    g0_.push_back(reg.at_zero(l));
    Vector r(es_.values.size());
    for (Eigen::Index i = 0; i < r.size(); ++i)
      r[i] = reg.diff_ratio(l, es_.values[i], kappa);
    ratios_.push_back(std::move(r));
  }
}

double PooledStatEvaluator::n2(int lambda_index) const {
  return n2_hat(es_, lambdas_.at(lambda_index));
}

std::vector<double> PooledStatEvaluator::observed() const {
  std::vector<int> idx(n_ + m_);
  std::iota(idx.begin(), idx.end(), 0);
  return from_index_set(idx.data());
}

std::vector<double> PooledStatEvaluator::permuted(
    const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != n_ + m_)
    throw std::invalid_argument("permutation has wrong length");
  return from_index_set(perm.data());
}

std::vector<double> PooledStatEvaluator::from_index_set(const int* idx) const {
  const int n = n_, m = m_;
  const Eigen::Index s = Z_.cols();

  // X block sums over the pooled Gram; the X0 and cross blocks follow from
  // the fixed totals
  std::vector<int> I(idx, idx + n);
  std::sort(I.begin(), I.end());
  double S_I = 0.0, diag_I = 0.0, T_I = 0.0;
  for (int a : I) {
    diag_I += K_U_(a, a);
    T_I += rowsum_[a];
    const double* col = K_U_.col(a).data();
    double acc = 0.0;
    for (int b : I) acc += col[b];
    S_I += acc;
  }
  double S_J = total_ - 2.0 * T_I + S_I;
  double S_IJ = T_I - S_I;
  double diag_J = trace_ - diag_I;

  Vector u = Vector::Zero(s), qI = Vector::Zero(s);
  for (int a : I) {
    u += Z_.row(a).transpose();
    qI += Zsq_.row(a).transpose();
  }
  Vector w = zsum_ - u;
  Vector qJ = zsqsum_ - qI;

  const double inv_s = 1.0 / static_cast<double>(es_.s);
  std::vector<double> out(lambdas_.size());
  for (std::size_t j = 0; j < lambdas_.size(); ++j) {
    const Vector& r = ratios_[j];
    double g0 = g0_[j];
    double ones_x = g0 * S_I + inv_s * u.cwiseProduct(u).dot(r);
    double tr_x = g0 * diag_I + inv_s * qI.dot(r);
    double ones_x0 = g0 * S_J + inv_s * w.cwiseProduct(w).dot(r);
    double tr_x0 = g0 * diag_J + inv_s * qJ.dot(r);
    double cross = g0 * S_IJ + inv_s * u.cwiseProduct(w).dot(r);
    out[j] = (ones_x - tr_x) / (static_cast<double>(n) * (n - 1)) +
             (ones_x0 - tr_x0) / (static_cast<double>(m) * (m - 1)) -
             2.0 * cross / (static_cast<double>(n) * m);
  }
  return out;
}

TestOutcome srct(const Eigen::Ref<const Matrix>& X,
                 const Eigen::Ref<const Matrix>& X0,
                 const Eigen::Ref<const Matrix>& Y0, const Kernel& kernel,
                 const Regularizer& reg, double lambda, double alpha,
                 double c1) {
  check_alpha(alpha);
  check_lambda(lambda);
  check_split_sizes(X.rows(), X0.rows(), Y0.rows());
  const double kappa = kernel.bound();
  reg.verify_constants(kappa);

  GramBundle bundle = make_gram_bundle(kernel, X, X0, Y0);
  EigenSystem es = centered_eigensystem(bundle.K_s, kappa);
  StatisticValue stat = eta_ts(bundle, es, reg, lambda, kappa);

  double inv_sizes = 1.0 / X.rows() + 1.0 / X0.rows();
  double gamma = 12.0 * (reg.c1() + reg.c2()) * n2_hat(es, lambda) /
                 (b1_constant(c1) * std::sqrt(alpha)) * inv_sizes;

  TestOutcome out;
  out.method = "srct";
  out.alpha = alpha;
  out.statistic = stat.value;
  out.critical_value = gamma;
  out.reject = stat.value >= gamma;
  out.per_grid.push_back(
      {lambda, kernel.name(), stat.value, gamma, out.reject});
  return out;
}

TestOutcome srpt(const Eigen::Ref<const Matrix>& X,
                 const Eigen::Ref<const Matrix>& X0,
                 const Eigen::Ref<const Matrix>& Y0, const Kernel& kernel,
                 const Regularizer& reg, double lambda, double alpha,
                 const PermutationPlan& plan) {
  check_alpha(alpha);
  const int n = static_cast<int>(X.rows());
  const int m = static_cast<int>(X0.rows());
  check_split_sizes(n, m, Y0.rows());
  if (X.cols() != X0.cols()) throw DataError("srpt: dimension mismatch");

  Matrix pooled(n + m, X.cols());
  pooled << X, X0;
  PooledStatEvaluator eval(kernel, reg, pooled, n, m, Y0, {lambda});

  double observed = eval.observed()[0];
  std::vector<double> permuted;
  permuted.reserve(plan.count);
  for (const auto& perm : make_permutations(plan, n + m))
    permuted.push_back(eval.permuted(perm)[0]);

  TestOutcome out;
  out.method = "srpt";
  out.alpha = alpha;
  out.statistic = observed;
  out.critical_value = permutation_critical(permuted, alpha);
  out.reject = permutation_pvalue(observed, permuted) <= alpha;
  out.per_grid.push_back(
      {lambda, kernel.name(), observed, out.critical_value, out.reject});
  return out;
}

TestOutcome oracle_test(const Eigen::Ref<const Matrix>& X,
                        const Regularizer& reg, double lambda, double alpha,
                        const MercerSpectrum& spectrum, int k_max) {
  check_alpha(alpha);
  check_lambda(lambda);
  StatisticValue stat = oracle_eta(X, reg, lambda, spectrum, k_max);
  double gamma = 2.0 * (reg.c1() + reg.c2()) * population_n2(spectrum, lambda) /
                 (X.rows() * std::sqrt(alpha));
  TestOutcome out;
  out.method = "oracle";
  out.alpha = alpha;
  out.statistic = stat.value;
  out.critical_value = gamma;
  out.reject = stat.value >= gamma;
  return out;
}

TestOutcome mmd_test(const Eigen::Ref<const Matrix>& X, const Kernel& kernel,
                     const ClosedFormNull& null, double alpha) {
  check_alpha(alpha);
  StatisticValue stat = mmd_sq_hat(X, kernel, null);
  double gamma = 4.0 * kernel.bound() / (std::sqrt(alpha) * X.rows());
  TestOutcome out;
  out.method = "mmd";
  out.alpha = alpha;
  out.statistic = stat.value;
  out.critical_value = gamma;
  out.reject = stat.value >= gamma;
  return out;
}

TestOutcome adaptive_srct(const Eigen::Ref<const Matrix>& X,
                          const Eigen::Ref<const Matrix>& X0,
                          const Eigen::Ref<const Matrix>& Y0,
                          const Kernel& kernel, const Regularizer& reg,
                          const std::vector<double>& lambdas, double alpha,
                          double c1) {
  check_alpha(alpha);
  if (lambdas.empty()) throw ConfigError("adaptive_srct: empty lambda grid");
  check_split_sizes(X.rows(), X0.rows(), Y0.rows());
  const double kappa = kernel.bound();
  reg.verify_constants(kappa);

  GramBundle bundle = make_gram_bundle(kernel, X, X0, Y0);
  EigenSystem es = centered_eigensystem(bundle.K_s, kappa);

  double alpha_cell = alpha / lambdas.size();
  double inv_sizes = 1.0 / X.rows() + 1.0 / X0.rows();
  double gamma = 12.0 * (reg.c1() + reg.c2()) /
                 (b1_constant(c1) * std::sqrt(alpha_cell)) * inv_sizes;

  TestOutcome out;
  out.method = "srct-adaptive";
  out.alpha = alpha;
  out.critical_value = gamma;
  double best = -std::numeric_limits<double>::infinity();
  for (double lambda : lambdas) {
    check_lambda(lambda);
    double n2 = n2_hat(es, lambda);
    StatisticValue stat = eta_ts(bundle, es, reg, lambda, kappa);
    // degenerate spectrum: nothing to normalize against, cell cannot reject
    double normalized = n2 > 0.0 ? stat.value / n2
                                 : -std::numeric_limits<double>::infinity();
    bool cell_reject = normalized >= gamma;
    out.per_grid.push_back({lambda, kernel.name(), normalized, gamma, cell_reject});
    best = std::max(best, normalized);
    out.reject = out.reject || cell_reject;
  }
  out.statistic = best;
  return out;
}

TestOutcome adaptive_srpt(const Eigen::Ref<const Matrix>& X,
                          const Eigen::Ref<const Matrix>& X0,
                          const Eigen::Ref<const Matrix>& Y0,
                          const std::vector<Kernel>& kernels,
                          const Regularizer& reg,
                          const std::vector<double>& lambdas, double alpha,
                          const PermutationPlan& plan) {
  check_alpha(alpha);
  if (kernels.empty() || lambdas.empty())
    throw ConfigError("adaptive_srpt: empty kernel or lambda grid");
  const int n = static_cast<int>(X.rows());
  const int m = static_cast<int>(X0.rows());
  check_split_sizes(n, m, Y0.rows());

  std::size_t cells = kernels.size() * lambdas.size();
  double alpha_cell = alpha / static_cast<double>(cells);
  if ((plan.count + 1) * alpha_cell < 1.0)
    std::cerr << "warning: " << plan.count << " permutations cannot resolve "
              << "the per-cell level " << alpha_cell << "; no cell can reject "
              << "(need at least " << std::ceil(cells / alpha) - 1
              << " permutations)\n";

  Matrix pooled(n + m, X.cols());
  pooled << X, X0;
  auto perms = make_permutations(plan, n + m);

  TestOutcome out;
  out.method = "srpt-adaptive";
  out.alpha = alpha;
  out.statistic = -std::numeric_limits<double>::infinity();
  out.critical_value = std::numeric_limits<double>::infinity();

  for (const Kernel& kernel : kernels) {
    PooledStatEvaluator eval(kernel, reg, pooled, n, m, Y0, lambdas);
    std::vector<double> observed = eval.observed();
    std::vector<std::vector<double>> permuted(
        lambdas.size(), std::vector<double>());
    for (auto& v : permuted) v.reserve(plan.count);
    for (const auto& perm : perms) {
      std::vector<double> vals = eval.permuted(perm);
      for (std::size_t j = 0; j < lambdas.size(); ++j)
        permuted[j].push_back(vals[j]);
    }
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
      bool cell_reject =
          permutation_pvalue(observed[j], permuted[j]) <= alpha_cell;
      double crit = permutation_critical(permuted[j], alpha_cell);
      out.per_grid.push_back(
          {lambdas[j], kernel.name(), observed[j], crit, cell_reject});
      if (cell_reject && observed[j] - crit > out.statistic - out.critical_value) {
        out.statistic = observed[j];
        out.critical_value = crit;
      }
      out.reject = out.reject || cell_reject;
    }
  }
  if (!out.reject && !out.per_grid.empty()) {
    // report the closest cell when nothing rejects
    const auto& c0 = *std::max_element(
        out.per_grid.begin(), out.per_grid.end(),
        [](const GridCellResult& a, const GridCellResult& b) {
          return a.statistic - a.critical_value < b.statistic - b.critical_value;
        });
    out.statistic = c0.statistic;
    out.critical_value = c0.critical_value;
  }
  return out;
}

TestOutcome energy_perm_test(const Eigen::Ref<const Matrix>& X,
                             const Eigen::Ref<const Matrix>& X0, double alpha,
                             const PermutationPlan& plan) {
  check_alpha(alpha);
  const int n = static_cast<int>(X.rows());
  const int m = static_cast<int>(X0.rows());
  if (n < 2 || m < 2) throw DataError("energy_perm_test: need n, m >= 2");
  if (X.cols() != X0.cols())
    throw DataError("energy_perm_test: dimension mismatch");

  // pooled pairwise distances once; every permutation is block sums
  const int N = n + m;
  Matrix P(N, X.cols());
  P << X, X0;
  Matrix D(N, N);
  for (int i = 0; i < N; ++i) {
    D(i, i) = 0.0;
    for (int j = i + 1; j < N; ++j) {
      double v = (P.row(i) - P.row(j)).norm();
      D(i, j) = v;
      D(j, i) = v;
    }
  }
  Vector rowsum = D.rowwise().sum();
  double total = rowsum.sum();

  auto stat_for = [&](const int* idx) {
    double S_I = 0.0, T_I = 0.0;
    std::vector<int> I(idx, idx + n);
    std::sort(I.begin(), I.end());
    for (int a : I) {
      T_I += rowsum[a];
      const double* col = D.col(a).data();
      double acc = 0.0;
      for (int b : I) acc += col[b];
      S_I += acc;
    }
    double S_J = total - 2.0 * T_I + S_I;
    double S_IJ = T_I - S_I;
    return 2.0 * S_IJ / (static_cast<double>(n) * m) -
           S_I / (static_cast<double>(n) * (n - 1)) -
           S_J / (static_cast<double>(m) * (m - 1));
  };

  std::vector<int> id(N);
  std::iota(id.begin(), id.end(), 0);
  double observed = stat_for(id.data());
  std::vector<double> permuted;
  permuted.reserve(plan.count);
  for (const auto& perm : make_permutations(plan, N))
    permuted.push_back(stat_for(perm.data()));

  TestOutcome out;
  out.method = "energy-perm";
  out.alpha = alpha;
  out.statistic = observed;
  out.critical_value = permutation_critical(permuted, alpha);
  out.reject = permutation_pvalue(observed, permuted) <= alpha;
  return out;
}

}  // namespace gof
