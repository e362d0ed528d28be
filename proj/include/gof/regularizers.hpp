#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace gof {

enum class RegularizerFamily { Tikhonov, Showalter };

// Spectral regularizer g_lambda applied to nonnegative operator spectra.
// Both families satisfy, for all x >= 0 and lambda > 0,
//   (A1)  x * g_lambda(x)       <= c1()
//   (A2)  lambda * g_lambda(x)  <= c2()
//   (A4)  g_lambda(x) (x+lambda) >= 1
// with infinite qualification.
class Regularizer {
 public:
  static Regularizer tikhonov() { return Regularizer(RegularizerFamily::Tikhonov); }
  static Regularizer showalter() { return Regularizer(RegularizerFamily::Showalter); }

  // g_lambda(x), x >= 0
  double operator()(double lambda, double x) const;

  // g_lambda(0) = 1/lambda for both families
  double at_zero(double lambda) const;

  // (g_lambda(x) - g_lambda(0)) / x, continuously extended at x = 0 by the
  // derivative of g_lambda there (-1/lambda^2 Tikhonov, -1/(2 lambda^2)
  // Showalter).  The switch to the limit happens below 1e-10 * kappa, where
  // kappa sets the scale of the spectrum at hand.
  double diff_ratio(double lambda, double x, double kappa) const;

  double c1() const { return 1.0; }
  double c2() const { return 1.0; }
  double qualification() const { return std::numeric_limits<double>::infinity(); }

  RegularizerFamily family() const { return family_; }
  std::string name() const {
    return family_ == RegularizerFamily::Tikhonov ? "tikhonov" : "showalter";
  }

  // Numerical scan of (A1)/(A2) over [0, kappa] x a lambda grid; throws
  // std::logic_error if either bound fails.  Cheap, run once before a
  // threshold that depends on c1/c2 is first used.
  void verify_constants(double kappa) const;

 private:
  explicit Regularizer(RegularizerFamily f) : family_(f) {}
  RegularizerFamily family_;
};

}  // namespace gof
