#include "gof/regularizers.hpp"

#include <cmath>
#include <stdexcept>

namespace gof {

namespace {

void check_args(double lambda, double x) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("regularizer: lambda must be positive");
  if (!(x >= 0.0) || !std::isfinite(x))
    throw std::invalid_argument("regularizer: x must be nonnegative");
}

// psi(u) = (1 - e^{-u} - u) / u^2, the rescaled Showalter difference
// quotient; -1/2 at u = 0.  Series below u = 1e-3 avoids the cancellation
// in the direct form.
double showalter_psi(double u) {
  if (u < 1e-3)
    return -0.5 + u / 6.0 - u * u / 24.0 + u * u * u / 120.0;
  return -(std::expm1(-u) + u) / (u * u);
}

}  // namespace

double Regularizer::operator()(double lambda, double x) const {
  check_args(lambda, x);
  if (family_ == RegularizerFamily::Tikhonov) return 1.0 / (x + lambda);
  // Showalter: (1 - e^{-x/lambda}) / x, continuous at 0 with value 1/lambda
  double u = x / lambda;
  if (u < 1e-8) return (1.0 - u / 2.0 + u * u / 6.0) / lambda;
  return -std::expm1(-u) / x;
}

double Regularizer::at_zero(double lambda) const {
  check_args(lambda, 0.0);
  return 1.0 / lambda;
}

double Regularizer::diff_ratio(double lambda, double x, double kappa) const {
  check_args(lambda, x);
  if (!(kappa > 0.0))
    throw std::invalid_argument("regularizer: kappa must be positive");
  bool at_limit = x < 1e-10 * kappa;
  if (family_ == RegularizerFamily::Tikhonov) {
    // (1/(x+lambda) - 1/lambda)/x = -1/(lambda (x+lambda)) for every x,
    // including the x -> 0 limit -1/lambda^2
    return at_limit ? -1.0 / (lambda * lambda) : -1.0 / (lambda * (x + lambda));
  }
  if (at_limit) return -0.5 / (lambda * lambda);
  return showalter_psi(x / lambda) / (lambda * lambda);
}

void Regularizer::verify_constants(double kappa) const {
  if (!(kappa > 0.0))
    throw std::invalid_argument("verify_constants: kappa must be positive");
  const double slack = 1.0 + 1e-12;
  for (double lambda : {1e-8 * kappa, 1e-4 * kappa, 1e-2 * kappa, kappa}) {
    for (int i = 0; i <= 2000; ++i) {
      double x = kappa * i / 2000.0;
      double g = (*this)(lambda, x);
      if (x * g > c1() * slack)
        throw std::logic_error("regularizer bound c1 violated");
      if (lambda * g > c2() * slack)
        throw std::logic_error("regularizer bound c2 violated");
      if (g * (x + lambda) < 1.0 - 1e-9)
        throw std::logic_error("regularizer lower bound violated");
    }
  }
}

}  // namespace gof
