#pragma once

#include <array>
#include <functional>
#include <optional>

#include "gof/distributions.hpp"
#include "gof/kernels.hpp"
#include "gof/regularizers.hpp"
#include "gof/spectral.hpp"

namespace gof {

struct StatisticValue {
  double value = 0.0;
  double lambda = 0.0;
  // the five assembled terms of the two-sample statistic, when available:
  // {ones_X, trace_X, ones_X0, trace_X0, cross}
  std::optional<std::array<double, 5>> components;
};

// All Gram blocks needed by the regularized two-sample statistic.  X are the
// data (n), X0 the null mean samples (m), Y0 the null covariance samples (s);
// Y0 never mixes with the others beyond these fixed blocks.
struct GramBundle {
  Matrix K_n;   // n x n
  Matrix K_m;   // m x m
  Matrix K_mn;  // m x n
  Matrix K_ns;  // n x s
  Matrix K_ms;  // m x s
  Matrix K_s;   // s x s
};

GramBundle make_gram_bundle(const Kernel& kernel,
                            const Eigen::Ref<const Matrix>& X,
                            const Eigen::Ref<const Matrix>& X0,
                            const Eigen::Ref<const Matrix>& Y0);

// Spectral-regularized two-sample statistic assembled from Gram blocks:
//   (ones - trace)/(n(n-1)) + (ones0 - trace0)/(m(m-1)) - 2 cross/(nm)
// where each term applies g_lambda(0) K + (1/s) K_.s Ht^{1/2} G Ht^{1/2}
// K_.s^T to the relevant block.  `es` must come from bundle.K_s.
StatisticValue eta_ts(const GramBundle& bundle, const EigenSystem& es,
                      const Regularizer& reg, double lambda, double kappa);

// Squared population-mean discrepancy with an analytic null embedding:
//   (1/(n(n-1))) sum_{i != j} K(X_i,X_j) - (2/n) sum_i mu0(X_i) + ||mu0||^2
struct ClosedFormNull {
  std::function<double(const Eigen::Ref<const Vector>&)> mean_embedding;
  double squared_norm = 0.0;
};

// Analytic embedding of the null under the given kernel.  Supported pairs:
// gaussian kernel with a gaussian null, gaussian kernel with a uniform cube
// null, periodic spline kernel with a uniform null on [0,1].  Anything else
// throws ConfigError.
ClosedFormNull closed_form_null(const Kernel& kernel,
                                const DistributionSpec& null_spec);

StatisticValue mmd_sq_hat(const Eigen::Ref<const Matrix>& X,
                          const Kernel& kernel, const ClosedFormNull& null);

// Eigenvalue sequence of the null covariance operator together with the
// multiplicity-2 trigonometric eigenbasis on [0,1] (cos & sin per frequency).
struct MercerSpectrum {
  std::function<double(int)> eigenvalue;  // lambda_k for frequency k >= 1
  int default_k_max = 1024;
};

// (2 pi k)^{-2r} spectrum of the periodic spline kernel of order r under the
// uniform null.
MercerSpectrum spline_spectrum(int order = 1);

// Exactly regularized one-sample statistic for a known spectrum:
//   (1/(n(n-1))) sum_{i != j} sum_{0<|k|<=k_max} g_lambda(l_k) l_k
//                                e^{i 2 pi k (X_i - X_j)}
// evaluated through the real basis.  X must be scalar samples in [0,1].
StatisticValue oracle_eta(const Eigen::Ref<const Matrix>& X,
                          const Regularizer& reg, double lambda,
                          const MercerSpectrum& spectrum, int k_max = 0);

// Truncated population effective dimensions of the spectrum.
double population_n2(const MercerSpectrum& spectrum, double lambda,
                     int k_trunc = 100000);
double population_n1(const MercerSpectrum& spectrum, double lambda,
                     int k_trunc = 100000);

// U-statistic energy distance between X and X0:
//   2 mean|X - X0| - mean|X - X'| - mean|X0 - X0'|
double energy_stat(const Eigen::Ref<const Matrix>& X,
                   const Eigen::Ref<const Matrix>& X0);

}  // namespace gof
