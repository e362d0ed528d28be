#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "gof/distributions.hpp"

using gof::ConfigError;
using gof::DistributionSpec;
using gof::Matrix;
using gof::parse_distribution;
using gof::RngStream;
using gof::Vector;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b,
               int intervals) {
  REQUIRE(intervals % 2 == 0);
  double h = (b - a) / intervals;
  double acc = f(a) + f(b);
  for (int i = 1; i < intervals; ++i)
    acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

double density1(const DistributionSpec& spec, double x) {
  Vector v(1);
  v[0] = x;
  return gof::density(spec, v);
}

// chi-square upper quantiles at level 0.999
double chi2_crit(int df) {
  switch (df) {
    case 3: return 16.266;
    case 7: return 24.322;
    case 8: return 26.124;
    case 9: return 27.877;
    default: REQUIRE(false); return 0.0;
  }
}

double chi2_stat(const std::vector<int>& counts,
                 const std::vector<double>& expected) {
  REQUIRE(counts.size() == expected.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    REQUIRE(expected[i] > 0.0);
    double diff = counts[i] - expected[i];
    stat += diff * diff / expected[i];
  }
  return stat;
}

}  // namespace

TEST_CASE("uniform cube sampling") {
  auto spec = parse_distribution("uniform:d=1");
  RngStream rng(301);
  const int n = 20000;
  Matrix X = gof::sample(spec, n, rng);
  REQUIRE(X.rows() == n);
  REQUIRE(X.cols() == 1);
  CHECK(X.minCoeff() >= 0.0);
  CHECK(X.maxCoeff() <= 1.0);

  std::vector<int> counts(10, 0);
  for (int i = 0; i < n; ++i)
    counts[std::min(9, static_cast<int>(10.0 * X(i, 0)))]++;
  std::vector<double> expected(10, n / 10.0);
  CHECK(chi2_stat(counts, expected) < chi2_crit(9));

  // quadrant counts in two dimensions
  auto spec2 = parse_distribution("uniform:d=2");
  Matrix X2 = gof::sample(spec2, n, rng);
  std::vector<int> quad(4, 0);
  for (int i = 0; i < n; ++i)
    quad[(X2(i, 0) < 0.5 ? 0 : 1) + (X2(i, 1) < 0.5 ? 0 : 2)]++;
  CHECK(chi2_stat(quad, std::vector<double>(4, n / 4.0)) < chi2_crit(3));

  Vector mid(2);
  mid << 0.3, 0.9;
  CHECK(gof::density(spec2, mid) == 1.0);
  mid << 0.3, 1.2;
  CHECK(gof::density(spec2, mid) == 0.0);
}

TEST_CASE("perturbation amplitude defaults and clipping") {
  auto spec = parse_distribution("perturbed_uniform:d=1,perturbations=1");
  CHECK(gof::perturbation_amplitude(spec) == doctest::Approx(2.7));
  spec.perturbations = 4;
  CHECK(gof::perturbation_amplitude(spec) == doctest::Approx(2.7 / 2.0));
  spec.dim = 2;
  CHECK(gof::perturbation_amplitude(spec) == doctest::Approx(2.7 / 4.0));

  // explicit amplitudes are honored until the positivity cap binds
  spec = parse_distribution("perturbed_uniform:d=1,amplitude=1.5");
  CHECK(gof::perturbation_amplitude(spec) == doctest::Approx(1.5));
  spec.amplitude = 50.0;
  CHECK(gof::perturbation_amplitude(spec) ==
        doctest::Approx(0.995 * std::exp(1.0)));
}

TEST_CASE("perturbed uniform density integrates to one and stays positive") {
  for (int P : {1, 2, 3}) {
    DistributionSpec spec;
    spec.family = gof::DistFamily::PerturbedUniform;
    spec.perturbations = P;
    double total =
        simpson([&](double x) { return density1(spec, x); }, 0.0, 1.0, 6000);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-7));

    double theta = gof::perturbation_amplitude(spec);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i <= 5000; ++i) {
      double p = density1(spec, i / 5000.0);
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    CHECK(lo >= 1.0 - theta * std::exp(-1.0) - 1e-12);
    CHECK(lo > 0.004);
    CHECK(hi <= 1.0 + theta * std::exp(-1.0) + 1e-12);
    // the dipole actually attains its envelope near the quarter points
    CHECK(hi > 1.0 + 0.9 * theta * std::exp(-1.0));
  }
}

TEST_CASE("perturbed uniform sampler matches quadrature bin masses") {
  auto spec = parse_distribution("perturbed_uniform:d=1,perturbations=2");
  const int n = 20000, bins = 8;
  RngStream rng(302);
  Matrix X = gof::sample(spec, n, rng);
  std::vector<int> counts(bins, 0);
  for (int i = 0; i < n; ++i)
    counts[std::min(bins - 1, static_cast<int>(bins * X(i, 0)))]++;
  std::vector<double> expected(bins);
  for (int b = 0; b < bins; ++b)
    expected[b] = n * simpson([&](double x) { return density1(spec, x); },
                              b / double(bins), (b + 1) / double(bins), 2000);
  CHECK(chi2_stat(counts, expected) < chi2_crit(7));
}

TEST_CASE("two-dimensional perturbation masses factorize") {
  auto spec = parse_distribution("perturbed_uniform:d=2,perturbations=1");
  double theta = gof::perturbation_amplitude(spec);
  auto spec1 = parse_distribution("perturbed_uniform:d=1,perturbations=1");
  double th1 = gof::perturbation_amplitude(spec1);

  // per-axis bump integral over thirds, recovered from the 1-d density
  std::vector<double> bump(3);
  for (int b = 0; b < 3; ++b)
    bump[b] = simpson(
                  [&](double x) { return (density1(spec1, x) - 1.0) / th1; },
                  b / 3.0, (b + 1) / 3.0, 2000);

  const int n = 30000;
  RngStream rng(303);
  Matrix X = gof::sample(spec, n, rng);
  std::vector<int> counts(9, 0);
  for (int i = 0; i < n; ++i) {
    int a = std::min(2, static_cast<int>(3.0 * X(i, 0)));
    int b = std::min(2, static_cast<int>(3.0 * X(i, 1)));
    counts[3 * a + b]++;
  }
  std::vector<double> expected(9);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      expected[3 * a + b] = n * (1.0 / 9.0 + theta * bump[a] * bump[b]);
  CHECK(chi2_stat(counts, expected) < chi2_crit(8));
}

TEST_CASE("gaussian moments and density") {
  auto spec = parse_distribution("gaussian:d=3,shift=1.5,scale=2");
  RngStream rng(304);
  const int n = 20000;
  Matrix X = gof::sample(spec, n, rng);
  Vector mean = X.colwise().mean();
  double se = std::sqrt(2.0 / n);
  CHECK(std::abs(mean[0] - 1.5) < 4.0 * se);
  CHECK(std::abs(mean[1]) < 4.0 * se);
  CHECK(std::abs(mean[2]) < 4.0 * se);
  Matrix C = X.rowwise() - mean.transpose();
  Matrix cov = C.transpose() * C / (n - 1.0);
  double var_se = 2.0 * std::sqrt(2.0 / n);  // var of sample variance ~ 2 s^4/n
  for (int j = 0; j < 3; ++j) CHECK(std::abs(cov(j, j) - 2.0) < 4.0 * var_se);
  CHECK(std::abs(cov(0, 1)) < 4.0 * 2.0 / std::sqrt(double(n)));

  Vector at_mean(3);
  at_mean << 1.5, 0.0, 0.0;
  CHECK(gof::density(spec, at_mean) ==
        doctest::Approx(std::pow(2.0 * M_PI * 2.0, -1.5)).epsilon(1e-12));

  auto d1 = parse_distribution("gaussian:d=1,shift=0.3,scale=0.7");
  double total =
      simpson([&](double x) { return density1(d1, x); }, -10.0, 10.0, 4000);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("uniform sphere sampling") {
  auto spec = parse_distribution("sphere_uniform:d=3");
  RngStream rng(305);
  const int n = 20000;
  Matrix X = gof::sample(spec, n, rng);
  for (int i = 0; i < n; ++i)
    REQUIRE(X.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
  Vector mean = X.colwise().mean();
  CHECK(mean.norm() < 4.0 / std::sqrt(3.0 * n) * 3.0);
  Matrix cov = X.transpose() * X / double(n);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double want = a == b ? 1.0 / 3.0 : 0.0;
      CHECK(std::abs(cov(a, b) - want) < 0.015);
    }
  Vector x(3);
  x << 0.0, 0.0, 1.0;
  CHECK(gof::density(spec, x) == doctest::Approx(1.0 / (4.0 * M_PI)));
}

TEST_CASE("vmf resultant length matches the bessel ratio") {
  for (double k : {0.5, 2.0, 8.0}) {
    double closed = std::cosh(k) / std::sinh(k) - 1.0 / k;
    CHECK(gof::vmf_mean_resultant(3, k) ==
          doctest::Approx(closed).epsilon(1e-12));
  }
  CHECK(gof::vmf_mean_resultant(3, 0.0) == 0.0);
  CHECK(gof::vmf_mean_resultant(5, 2.0) > 0.0);
  CHECK(gof::vmf_mean_resultant(5, 2.0) < gof::vmf_mean_resultant(3, 2.0));
  CHECK_THROWS_AS(gof::vmf_mean_resultant(1, 2.0), ConfigError);
  CHECK_THROWS_AS(gof::vmf_mean_resultant(3, -1.0), ConfigError);
}

TEST_CASE("vmf sampler against the analytic cosine law") {
  auto spec = parse_distribution("vmf:d=3,concentration=2");
  const double k = 2.0;
  RngStream rng(306);
  const int n = 20000;
  Matrix X = gof::sample(spec, n, rng);
  for (int i = 0; i < n; ++i)
    REQUIRE(X.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));

  // mean resultant along the pole
  double mean_t = X.col(2).mean();
  CHECK(std::abs(mean_t - gof::vmf_mean_resultant(3, k)) < 0.01);

  // on S^2 the cosine t has density prop. to e^{kt}; bin at analytic decile
  // boundaries t_q = log(e^{-k} + q (e^k - e^{-k})) / k
  std::vector<int> counts(10, 0);
  double ek = std::exp(k), emk = std::exp(-k);
  for (int i = 0; i < n; ++i) {
    double q = (std::exp(k * X(i, 2)) - emk) / (ek - emk);
    counts[std::min(9, static_cast<int>(10.0 * q))]++;
  }
  CHECK(chi2_stat(counts, std::vector<double>(10, n / 10.0)) < chi2_crit(9));

  // density normalizes over the sphere: chi(t) = 2 pi p(t) integrates to 1
  Vector probe(3);
  auto marginal = [&](double t) {
    probe << std::sqrt(std::max(0.0, 1.0 - t * t)), 0.0, t;
    return 2.0 * M_PI * gof::density(spec, probe);
  };
  CHECK(simpson(marginal, -1.0, 1.0, 4000) ==
        doctest::Approx(1.0).epsilon(1e-9));

  // k = 0 falls back to the uniform sphere
  auto flat = parse_distribution("vmf:d=3,concentration=0");
  probe << 0.0, 1.0, 0.0;
  CHECK(gof::density(flat, probe) == doctest::Approx(1.0 / (4.0 * M_PI)));
}

TEST_CASE("vmf mean direction is honored") {
  DistributionSpec spec = parse_distribution("vmf:d=3,concentration=4");
  spec.mean_direction = {1.0, 0.0, 0.0};
  RngStream rng(307);
  const int n = 20000;
  Matrix X = gof::sample(spec, n, rng);
  double r = gof::vmf_mean_resultant(3, 4.0);
  CHECK(std::abs(X.col(0).mean() - r) < 0.01);
  CHECK(std::abs(X.col(1).mean()) < 0.01);
  CHECK(std::abs(X.col(2).mean()) < 0.01);

  // density is largest at the mean direction
  Vector at_mu(3), away(3);
  at_mu << 1.0, 0.0, 0.0;
  away << -1.0, 0.0, 0.0;
  CHECK(gof::density(spec, at_mu) > gof::density(spec, away));

  spec.mean_direction = {1.0, 0.0};
  CHECK_THROWS_AS(gof::density(spec, at_mu), ConfigError);
}

TEST_CASE("watson mixture sampler and density") {
  auto spec = parse_distribution("watson_mixture:d=3,concentration=8");
  const double k = 8.0;
  RngStream rng(308);
  const int n = 20000;
  Matrix X = gof::sample(spec, n, rng);
  for (int i = 0; i < n; ++i)
    REQUIRE(X.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));

  // axial symmetry: x and -x are equally likely
  Vector mean = X.colwise().mean();
  CHECK(mean.norm() < 0.03);

  // expected squared cosine along each component axis:
  //   gamma = E[t^2] along its own axis,  beta = (1 - gamma) / 2 across,
  //   and the axes meet at cosine 1/3, so the mixture gives
  //   E[(m a^T x)^2] = (gamma + beta + (gamma - beta) / 9) / 2
  double z0 = simpson([&](double t) { return std::exp(k * t * t); }, -1.0,
                      1.0, 4000);
  double z2 = simpson([&](double t) { return t * t * std::exp(k * t * t); },
                      -1.0, 1.0, 4000);
  double gamma = z2 / z0;
  double beta = 0.5 * (1.0 - gamma);
  double want = 0.5 * (gamma + beta + (gamma - beta) / 9.0);

  Vector m1(3), m2(3);
  m1 << 1.0, 1.0, 1.0;
  m1 /= std::sqrt(3.0);
  m2 = m1;
  m2[0] = -m2[0];
  for (const Vector& axis : {m1, m2}) {
    Vector t = X * axis;
    double got = t.array().square().mean();
    double se = std::sqrt((t.array().pow(4).mean() - got * got) / n);
    CHECK(std::abs(got - want) < 5.0 * se);
  }

  // normalization agrees with direct quadrature of the angular integral
  Vector probe(3);
  probe << 0.2, -0.4, std::sqrt(1.0 - 0.04 - 0.16);
  double t1 = m1.dot(probe), t2 = m2.dot(probe);
  double direct = 0.5 * (std::exp(k * t1 * t1) + std::exp(k * t2 * t2)) /
                  (4.0 * M_PI * 0.5 * z0);
  CHECK(gof::density(spec, probe) == doctest::Approx(direct).epsilon(1e-10));

  // and the density integrates to one over the sphere
  auto spec2 = parse_distribution("watson_mixture:d=3,concentration=2");
  int nt = 256, np = 512;
  double total = 0.0;
  Vector y(3);
  for (int i = 0; i <= nt; ++i) {
    double th = M_PI * i / nt;
    double wt = (i == 0 || i == nt) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    double row = 0.0;
    for (int j = 0; j <= np; ++j) {
      double ph = 2.0 * M_PI * j / np;
      double wp = (j == 0 || j == np) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      y << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
          std::cos(th);
      row += wp * gof::density(spec2, y);
    }
    total += wt * row * std::sin(th);
  }
  total *= (M_PI / nt / 3.0) * (2.0 * M_PI / np / 3.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));

  // zero concentration reduces to the uniform sphere
  auto flat = parse_distribution("watson_mixture:d=3,concentration=0");
  Matrix U = gof::sample(flat, 20000, rng);
  double t2m = (U * m1).array().square().mean();
  CHECK(std::abs(t2m - 1.0 / 3.0) < 0.015);
}

TEST_CASE("spec labels round-trip through the parser") {
  for (const char* text :
       {"uniform:d=3", "perturbed_uniform:d=1,perturbations=3",
        "perturbed_uniform:d=2,perturbations=2,amplitude=0.5",
        "gaussian:d=2,shift=0.5,scale=2", "sphere_uniform:d=4",
        "vmf:d=3,concentration=2", "watson_mixture:d=3,concentration=8"}) {
    auto spec = parse_distribution(text);
    auto back = parse_distribution(spec.label());
    CHECK(back.label() == spec.label());
    CHECK(back.family == spec.family);
    CHECK(back.dim == spec.dim);
    CHECK(back.perturbations == spec.perturbations);
    CHECK(back.shift == spec.shift);
    CHECK(back.scale == spec.scale);
    CHECK(back.concentration == spec.concentration);
  }
  // bare family names parse with defaults
  CHECK(parse_distribution("uniform").dim == 1);
  CHECK(parse_distribution("uniform_cube").family ==
        gof::DistFamily::UniformCube);
}

TEST_CASE("malformed specs are refused") {
  CHECK_THROWS_AS(parse_distribution("cauchy:d=1"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("gaussian:width=2"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("gaussian:d"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("gaussian:d=x"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("gaussian:d=0"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("gaussian:scale=-1"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("vmf:d=1"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("vmf:d=3,concentration=-2"), ConfigError);
  CHECK_THROWS_AS(parse_distribution("perturbed_uniform:perturbations=0"),
                  ConfigError);

  RngStream rng(1);
  auto spec = parse_distribution("uniform:d=2");
  CHECK_THROWS_AS(gof::sample(spec, -1, rng), ConfigError);
  Vector wrong(3);
  wrong.setZero();
  CHECK_THROWS_AS(gof::density(spec, wrong), gof::DataError);
  CHECK(gof::sample(spec, 0, rng).rows() == 0);
}
