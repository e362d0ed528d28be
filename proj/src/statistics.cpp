#include "gof/statistics.hpp"

#include <cmath>

namespace gof {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_finite(double v, const char* what) {
  if (!std::isfinite(v))
    throw std::runtime_error(std::string("non-finite value in ") + what);
}

}  // namespace

GramBundle make_gram_bundle(const Kernel& kernel,
                            const Eigen::Ref<const Matrix>& X,
                            const Eigen::Ref<const Matrix>& X0,
                            const Eigen::Ref<const Matrix>& Y0) {
  if (X.rows() < 2 || X0.rows() < 2)
    throw DataError("gram bundle: need at least two points in X and X0");
  if (Y0.rows() < 2)
    throw DataError("gram bundle: need at least two covariance samples");
  GramBundle b;
  b.K_n = kernel.gram(X, X);
  b.K_m = kernel.gram(X0, X0);
  b.K_mn = kernel.gram(X0, X);
  b.K_ns = kernel.gram(X, Y0);
  b.K_ms = kernel.gram(X0, Y0);
  b.K_s = kernel.gram(Y0, Y0);
  return b;
}

StatisticValue eta_ts(const GramBundle& bundle, const EigenSystem& es,
                      const Regularizer& reg, double lambda, double kappa) {
  const Eigen::Index n = bundle.K_n.rows();
  const Eigen::Index m = bundle.K_m.rows();
  const Eigen::Index s = bundle.K_s.rows();
  if (es.s != s) throw std::invalid_argument("eta_ts: eigensystem/K_s size mismatch");
  if (n < 2 || m < 2) throw DataError("eta_ts: need n >= 2 and m >= 2");

  const double g0 = reg.at_zero(lambda);
  const Matrix G = build_G(es, reg, lambda, kappa);

  // Ht^{1/2} G Ht^{1/2} = (s/(s-1)) H G H via double centering of G
  Vector rmean = G.rowwise().mean();
  double gmean = rmean.mean();
  Matrix M = G;
  M.colwise() -= rmean;
  M.rowwise() -= rmean.transpose();
  M.array() += gmean;
  M *= static_cast<double>(s) / static_cast<double>(s - 1);

  Matrix Wn = bundle.K_ns * M;  // n x s
  Matrix Wm = bundle.K_ms * M;  // m x s

  auto block_sums = [&](const Matrix& K, const Matrix& W,
                        const Matrix& K_dots) -> std::pair<double, double> {
    // A = g0 K + (1/s) W K_dots^T; returns (1^T A 1, tr A) without forming A
    double ones = g0 * K.sum() + (W.colwise().sum().dot(K_dots.colwise().sum())) / s;
    double tr = g0 * K.trace() + W.cwiseProduct(K_dots).sum() / s;
    return {ones, tr};
  };

  auto [ones_x, tr_x] = block_sums(bundle.K_n, Wn, bundle.K_ns);
  auto [ones_x0, tr_x0] = block_sums(bundle.K_m, Wm, bundle.K_ms);
  double cross = g0 * bundle.K_mn.sum() +
                 (Wm.colwise().sum().dot(bundle.K_ns.colwise().sum())) / s;

  double value = (ones_x - tr_x) / (static_cast<double>(n) * (n - 1)) +
                 (ones_x0 - tr_x0) / (static_cast<double>(m) * (m - 1)) -
                 2.0 * cross / (static_cast<double>(n) * m);
  check_finite(value, "eta_ts");

  StatisticValue sv;
  sv.value = value;
  sv.lambda = lambda;
  sv.components = {ones_x, tr_x, ones_x0, tr_x0, cross};
  return sv;
}

ClosedFormNull closed_form_null(const Kernel& kernel,
                                const DistributionSpec& null_spec) {
  ClosedFormNull cf;

  if (kernel.family() == KernelFamily::Gaussian &&
      null_spec.family == DistFamily::Gaussian) {
    double h = kernel.bandwidth();
    double s2 = null_spec.scale;
    int d = null_spec.dim;
    double shift = null_spec.shift;
    double amp = std::pow(h / (h + s2), 0.5 * d);
    cf.mean_embedding = [=](const Eigen::Ref<const Vector>& x) {
      Vector c = x;
      c[0] -= shift;
      return amp * std::exp(-c.squaredNorm() / (2.0 * (h + s2)));
    };
    cf.squared_norm = std::pow(h / (h + 2.0 * s2), 0.5 * d);
    return cf;
  }

  if (kernel.family() == KernelFamily::Gaussian &&
      null_spec.family == DistFamily::UniformCube) {
    double h = kernel.bandwidth();
    int d = null_spec.dim;
    double rt = std::sqrt(2.0 * h);
    cf.mean_embedding = [=](const Eigen::Ref<const Vector>& x) {
      double p = 1.0;
      for (int j = 0; j < d; ++j)
        p *= std::sqrt(kPi * h / 2.0) *
             (std::erf((1.0 - x[j]) / rt) + std::erf(x[j] / rt));
      return p;
    };
    // per-axis value of the double integral of K over [0,1]^2
    double v = std::sqrt(2.0 * kPi * h) * std::erf(1.0 / rt) -
               2.0 * h * (1.0 - std::exp(-1.0 / (2.0 * h)));
    cf.squared_norm = std::pow(v, d);
    return cf;
  }

  if (kernel.family() == KernelFamily::PeriodicSpline &&
      null_spec.family == DistFamily::UniformCube && null_spec.dim == 1) {
    // B_2({x-y}) integrates to zero in y, so the embedding vanishes
    cf.mean_embedding = [](const Eigen::Ref<const Vector>&) { return 0.0; };
    cf.squared_norm = 0.0;
    return cf;
  }

  throw ConfigError("no closed-form null embedding for kernel " +
                    kernel.name() + " under " + null_spec.label());
}

StatisticValue mmd_sq_hat(const Eigen::Ref<const Matrix>& X,
                          const Kernel& kernel, const ClosedFormNull& null) {
  const Eigen::Index n = X.rows();
  if (n < 2) throw DataError("mmd_sq_hat: need at least two points");
  Matrix K = kernel.gram(X, X);
  double pair_term = (K.sum() - K.trace()) / (static_cast<double>(n) * (n - 1));
  double emb = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    emb += null.mean_embedding(X.row(i).transpose());
  double value = pair_term - 2.0 * emb / n + null.squared_norm;
  check_finite(value, "mmd_sq_hat");
  StatisticValue sv;
  sv.value = value;
  return sv;
}

MercerSpectrum spline_spectrum(int order) {
  if (order < 1) throw ConfigError("spline_spectrum: order must be >= 1");
  MercerSpectrum sp;
  sp.eigenvalue = [order](int k) {
    return std::pow(2.0 * kPi * k, -2.0 * order);
  };
  return sp;
}

StatisticValue oracle_eta(const Eigen::Ref<const Matrix>& X,
                          const Regularizer& reg, double lambda,
                          const MercerSpectrum& spectrum, int k_max) {
  const Eigen::Index n = X.rows();
  if (n < 2) throw DataError("oracle_eta: need at least two points");
  if (X.cols() != 1) throw DataError("oracle_eta: scalar samples required");
  if (k_max <= 0) k_max = spectrum.default_k_max;

  // For each frequency the pair sum over i != j of
  //   2 cos(2 pi k (X_i - X_j))
  // collapses to 2 (c_k^2 + s_k^2 - n) with c_k, s_k the cos/sin sums.
  double acc = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    double lk = spectrum.eigenvalue(k);
    double w = reg(lambda, lk) * lk;
    double ck = 0.0, sk = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double arg = 2.0 * kPi * k * X(i, 0);
      ck += std::cos(arg);
      sk += std::sin(arg);
    }
    acc += w * 2.0 * (ck * ck + sk * sk - n);
  }
  double value = acc / (static_cast<double>(n) * (n - 1));
  check_finite(value, "oracle_eta");
  StatisticValue sv;
  sv.value = value;
  sv.lambda = lambda;
  return sv;
}

double population_n2(const MercerSpectrum& spectrum, double lambda,
                     int k_trunc) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("population_n2: lambda must be positive");
  double acc = 0.0;
  for (int k = 1; k <= k_trunc; ++k) {
    double lk = spectrum.eigenvalue(k);
    double r = lk / (lk + lambda);
    acc += 2.0 * r * r;  // cos and sin mode per frequency
  }
  return std::sqrt(acc);
}

double population_n1(const MercerSpectrum& spectrum, double lambda,
                     int k_trunc) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("population_n1: lambda must be positive");
  double acc = 0.0;
  for (int k = 1; k <= k_trunc; ++k) {
    double lk = spectrum.eigenvalue(k);
    acc += 2.0 * lk / (lk + lambda);
  }
  return acc;
}

double energy_stat(const Eigen::Ref<const Matrix>& X,
                   const Eigen::Ref<const Matrix>& X0) {
  const Eigen::Index n = X.rows(), m = X0.rows();
  if (n < 2 || m < 2) throw DataError("energy_stat: need n >= 2 and m >= 2");
  if (X.cols() != X0.cols()) throw DataError("energy_stat: dimension mismatch");
  double cross = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      cross += (X.row(i) - X0.row(j)).norm();
  double within_x = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      within_x += (X.row(i) - X.row(j)).norm();
  double within_x0 = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j)
      within_x0 += (X0.row(i) - X0.row(j)).norm();
  return 2.0 * cross / (static_cast<double>(n) * m) -
         2.0 * within_x / (static_cast<double>(n) * (n - 1)) -
         2.0 * within_x0 / (static_cast<double>(m) * (m - 1));
}

}  // namespace gof
