#include "gof/distributions.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace gof {

namespace {

constexpr double kPi = 3.14159265358979323846;

double surface_area(int d) {  // of S^{d-1} in R^d
  return 2.0 * std::exp(0.5 * d * std::log(kPi) - std::lgamma(0.5 * d));
}

// Smooth dipole on (0,1): a positive bump on the first half, its mirrored
// negative on the second, zero at 0, 1/2, 1 and integrating to zero.
double dipole(double t) {
  auto bump = [](double v) {
    double den = 1.0 - v * v;
    if (den <= 0.0) return 0.0;
    return std::exp(-1.0 / den);
  };
  if (t > 0.0 && t < 0.5) return bump(4.0 * t - 1.0);
  if (t > 0.5 && t < 1.0) return -bump(4.0 * t - 3.0);
  return 0.0;
}

double gamma_sample(double alpha, RngStream& rng) {
  if (alpha < 1.0) {
    // boost to alpha+1 and shrink back
    double u = rng.uniform();
    return gamma_sample(alpha + 1.0, rng) * std::pow(u, 1.0 / alpha);
  }
  // Marsaglia-Tsang squeeze
  double d = alpha - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = rng.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double beta_sample(double a, double b, RngStream& rng) {
  for (;;) {
    double x = gamma_sample(a, rng);
    double y = gamma_sample(b, rng);
    if (x + y > 0.0) return x / (x + y);
  }
}

Vector sphere_point(int d, RngStream& rng) {
  Vector z(d);
  for (;;) {
    for (int i = 0; i < d; ++i) z[i] = rng.normal();
    double n = z.norm();
    if (n > 1e-12) return z / n;
  }
}

// Reflects the north pole e_d onto mu (Householder), applied to x.
Vector rotate_from_pole(const Vector& x, const Vector& mu) {
  int d = static_cast<int>(mu.size());
  Vector u = -mu;
  u[d - 1] += 1.0;  // e_d - mu
  double nn = u.squaredNorm();
  if (nn < 1e-24) return x;  // mu is (numerically) the pole already
  return x - u * (2.0 * u.dot(x) / nn);
}

// Tangent-weight rejection sampler for the von Mises-Fisher distribution.
Vector vmf_point(const Vector& mu, double k, RngStream& rng) {
  int d = static_cast<int>(mu.size());
  if (k == 0.0) return sphere_point(d, rng);
  double dm1 = d - 1.0;
  double b = (-2.0 * k + std::sqrt(4.0 * k * k + dm1 * dm1)) / dm1;
  double x0 = (1.0 - b) / (1.0 + b);
  double c = k * x0 + dm1 * std::log(1.0 - x0 * x0);
  double w;
  for (;;) {
    double z = beta_sample(0.5 * dm1, 0.5 * dm1, rng);
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    double u = rng.uniform();
    if (k * w + dm1 * std::log(1.0 - x0 * w) - c >= std::log(u)) break;
  }
  Vector x(d);
  if (d == 2) {
    x[0] = (rng.uniform() < 0.5 ? 1.0 : -1.0) * std::sqrt(std::max(0.0, 1.0 - w * w));
  } else {
    Vector v = sphere_point(d - 1, rng);
    x.head(d - 1) = std::sqrt(std::max(0.0, 1.0 - w * w)) * v;
  }
  x[d - 1] = w;
  return rotate_from_pole(x, mu);
}

// Kummer confluent hypergeometric M(1/2, b, k), k >= 0.
double kummer_half(double b, double k) {
  double term = 1.0, sum = 1.0;
  double aj = 0.5, bj = b;
  for (int j = 1; j < 2000; ++j) {
    term *= (aj / bj) * (k / j);
    sum += term;
    aj += 1.0;
    bj += 1.0;
    if (j > 4 && term < sum * 1e-15) break;
  }
  return sum;
}

std::pair<Vector, Vector> watson_means(int d) {
  Vector m1 = Vector::Ones(d) / std::sqrt(static_cast<double>(d));
  Vector m2 = m1;
  m2[0] = -m2[0];
  return {m1, m2};
}

Vector watson_point(const Vector& mu, double k, RngStream& rng) {
  int d = static_cast<int>(mu.size());
  // rejection from the uniform sphere; envelope exp(k)
  for (;;) {
    Vector x = sphere_point(d, rng);
    double t = mu.dot(x);
    if (std::log(rng.uniform() + 1e-300) < k * (t * t - 1.0)) return x;
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void validate(const DistributionSpec& spec) {
  require(spec.dim >= 1, "distribution: dimension must be >= 1");
  switch (spec.family) {
    case DistFamily::PerturbedUniform:
      require(spec.perturbations >= 1,
              "perturbed_uniform: perturbations must be >= 1");
      break;
    case DistFamily::Gaussian:
      require(spec.scale > 0.0, "gaussian: scale must be positive");
      break;
    case DistFamily::SphereUniform:
    case DistFamily::Vmf:
    case DistFamily::WatsonMixture:
      require(spec.dim >= 2, "sphere distributions require dimension >= 2");
      require(spec.concentration >= 0.0,
              "concentration must be nonnegative");
      break;
    default:
      break;
  }
}

Vector vmf_mu(const DistributionSpec& spec) {
  if (spec.mean_direction.empty()) {
    Vector mu = Vector::Zero(spec.dim);
    mu[spec.dim - 1] = 1.0;
    return mu;
  }
  require(static_cast<int>(spec.mean_direction.size()) == spec.dim,
          "vmf: mean direction has wrong dimension");
  Vector mu = Eigen::Map<const Vector>(spec.mean_direction.data(), spec.dim);
  double n = mu.norm();
  require(n > 0.0, "vmf: mean direction must be nonzero");
  return mu / n;
}

}  // namespace

double perturbation_amplitude(const DistributionSpec& spec) {
  int P = spec.perturbations;
  int d = spec.dim;
  double theta = spec.amplitude > 0.0
                     ? spec.amplitude
                     : 2.7 * std::pow(static_cast<double>(P), -0.5 * d);
  // clip so the density keeps a positive floor: min p = 1 - theta e^{-d}
  double cap = 0.995 * std::exp(static_cast<double>(d));
  return std::min(theta, cap);
}

Matrix sample(const DistributionSpec& spec, int count, RngStream& rng) {
  validate(spec);
  if (count < 0) throw ConfigError("sample: count must be nonnegative");
  const int d = spec.dim;
  Matrix out(count, d);

  switch (spec.family) {
    case DistFamily::UniformCube:
      for (int i = 0; i < count; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = rng.uniform();
      return out;

    case DistFamily::PerturbedUniform: {
      double theta = perturbation_amplitude(spec);
      double envelope = 1.0 + theta * std::exp(-static_cast<double>(d));
      Vector x(d);
      for (int i = 0; i < count; ++i) {
        for (;;) {
          for (int j = 0; j < d; ++j) x[j] = rng.uniform();
          if (rng.uniform() * envelope <= density(spec, x)) break;
        }
        out.row(i) = x;
      }
      return out;
    }

    case DistFamily::Gaussian: {
      double sd = std::sqrt(spec.scale);
      for (int i = 0; i < count; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = sd * rng.normal();
      out.col(0).array() += spec.shift;
      return out;
    }

    case DistFamily::SphereUniform:
      for (int i = 0; i < count; ++i) out.row(i) = sphere_point(d, rng);
      return out;

    case DistFamily::Vmf: {
      Vector mu = vmf_mu(spec);
      for (int i = 0; i < count; ++i)
        out.row(i) = vmf_point(mu, spec.concentration, rng);
      return out;
    }

    case DistFamily::WatsonMixture: {
      auto [m1, m2] = watson_means(d);
      for (int i = 0; i < count; ++i) {
        const Vector& mu = rng.uniform() < 0.5 ? m1 : m2;
        out.row(i) = watson_point(mu, spec.concentration, rng);
      }
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

double density(const DistributionSpec& spec,
               const Eigen::Ref<const Vector>& x) {
  validate(spec);
  const int d = spec.dim;
  if (x.size() != d) throw DataError("density: dimension mismatch");

  switch (spec.family) {
    case DistFamily::UniformCube: {
      for (int j = 0; j < d; ++j)
        if (x[j] < 0.0 || x[j] > 1.0) return 0.0;
      return 1.0;
    }

    case DistFamily::PerturbedUniform: {
      int P = spec.perturbations;
      double theta = perturbation_amplitude(spec);
      double prod = 1.0;
      for (int j = 0; j < d; ++j) {
        if (x[j] < 0.0 || x[j] > 1.0) return 0.0;
        double t = P * x[j];
        t -= std::floor(std::min(t, P - 1e-12));  // cell-local coordinate
        prod *= dipole(t);
        if (prod == 0.0) break;
      }
      return 1.0 + theta * prod;
    }

    case DistFamily::Gaussian: {
      double inv2s = 1.0 / (2.0 * spec.scale);
      Vector c = x;
      c[0] -= spec.shift;
      double q = c.squaredNorm();
      return std::exp(-q * inv2s) /
             std::pow(2.0 * kPi * spec.scale, 0.5 * d);
    }

    case DistFamily::SphereUniform:
      return 1.0 / surface_area(d);

    case DistFamily::Vmf: {
      double k = spec.concentration;
      if (k == 0.0) return 1.0 / surface_area(d);
      Vector mu = vmf_mu(spec);
      double nu = 0.5 * d - 1.0;
      double norm = std::pow(k, nu) /
                    (std::pow(2.0 * kPi, 0.5 * d) * std::cyl_bessel_i(nu, k));
      return norm * std::exp(k * mu.dot(x));
    }

    case DistFamily::WatsonMixture: {
      double k = spec.concentration;
      auto [m1, m2] = watson_means(d);
      double c = 1.0 / (surface_area(d) * kummer_half(0.5 * d, k));
      double t1 = m1.dot(x), t2 = m2.dot(x);
      return 0.5 * c * (std::exp(k * t1 * t1) + std::exp(k * t2 * t2));
    }
  }
  throw std::logic_error("unreachable");
}

double vmf_mean_resultant(int dim, double concentration) {
  if (dim < 2) throw ConfigError("vmf_mean_resultant: dimension must be >= 2");
  if (concentration < 0.0)
    throw ConfigError("vmf_mean_resultant: concentration must be >= 0");
  if (concentration == 0.0) return 0.0;
  double nu = 0.5 * dim - 1.0;
  return std::cyl_bessel_i(nu + 1.0, concentration) /
         std::cyl_bessel_i(nu, concentration);
}

std::string DistributionSpec::label() const {
  std::ostringstream os;
  switch (family) {
    case DistFamily::UniformCube:
      os << "uniform:d=" << dim;
      break;
    case DistFamily::PerturbedUniform:
      os << "perturbed_uniform:d=" << dim << ",perturbations=" << perturbations;
      if (amplitude > 0.0) os << ",amplitude=" << amplitude;
      break;
    case DistFamily::Gaussian:
      os << "gaussian:d=" << dim << ",shift=" << shift << ",scale=" << scale;
      break;
    case DistFamily::SphereUniform:
      os << "sphere_uniform:d=" << dim;
      break;
    case DistFamily::Vmf:
      os << "vmf:d=" << dim << ",concentration=" << concentration;
      break;
    case DistFamily::WatsonMixture:
      os << "watson_mixture:d=" << dim << ",concentration=" << concentration;
      break;
  }
  return os.str();
}

DistributionSpec parse_distribution(const std::string& text) {
  auto colon = text.find(':');
  std::string fam = text.substr(0, colon);
  DistributionSpec spec;
  if (fam == "uniform" || fam == "uniform_cube")
    spec.family = DistFamily::UniformCube;
  else if (fam == "perturbed_uniform")
    spec.family = DistFamily::PerturbedUniform;
  else if (fam == "gaussian")
    spec.family = DistFamily::Gaussian;
  else if (fam == "sphere_uniform")
    spec.family = DistFamily::SphereUniform;
  else if (fam == "vmf")
    spec.family = DistFamily::Vmf;
  else if (fam == "watson_mixture")
    spec.family = DistFamily::WatsonMixture;
  else
    throw ConfigError("unknown distribution family: " + fam);

  if (colon == std::string::npos) {
    validate(spec);
    return spec;
  }
  std::stringstream rest(text.substr(colon + 1));
  std::string kv;
  while (std::getline(rest, kv, ',')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("distribution option missing '=': " + kv);
    std::string key = kv.substr(0, eq);
    std::string val = kv.substr(eq + 1);
    try {
      if (key == "d" || key == "dim")
        spec.dim = std::stoi(val);
      else if (key == "perturbations" || key == "P")
        spec.perturbations = std::stoi(val);
      else if (key == "amplitude")
        spec.amplitude = std::stod(val);
      else if (key == "shift")
        spec.shift = std::stod(val);
      else if (key == "scale")
        spec.scale = std::stod(val);
      else if (key == "concentration" || key == "k")
        spec.concentration = std::stod(val);
      else
        throw ConfigError("unknown distribution option: " + key);
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad value for distribution option " + key + ": " + val);
    } catch (const std::out_of_range&) {
      throw ConfigError("bad value for distribution option " + key + ": " + val);
    }
  }
  validate(spec);
  return spec;
}

}  // namespace gof
