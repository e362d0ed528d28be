#pragma once

#include <Eigen/Dense>

#include "gof/kernels.hpp"
#include "gof/regularizers.hpp"

namespace gof {

// Eigendecomposition of the doubly-centered, rescaled covariance Gram
//   (1/s) Ht^{1/2} K_s Ht^{1/2},   Ht^{1/2} = sqrt(s/(s-1)) (I - (1/s) 11^T),
// which shares its nonzero spectrum with the unbiased feature-space
// covariance estimate built from the s covariance samples.
struct EigenSystem {
  Vector values;   // descending, >= 0 after the rounding clamp
  Matrix vectors;  // orthonormal columns, aligned with `values`
  int s = 0;
};

// kappa <= 0 means "infer the scale from the diagonal of K_s".  Negative
// eigenvalues above -1e-10 * kappa are rounded to zero; anything below that
// indicates a broken Gram matrix and throws.
EigenSystem centered_eigensystem(const Eigen::Ref<const Matrix>& K_s,
                                 double kappa = -1.0);

// G = sum_i (g_lambda(ev_i) - g_lambda(0))/ev_i * v_i v_i^T with the
// difference quotient continued through ev_i = 0.  All s eigenpairs enter;
// zero modes carry the analytic limit, matching the closed Tikhonov form
// G = -(1/lambda) (C + lambda I)^{-1}.
Matrix build_G(const EigenSystem& es, const Regularizer& reg, double lambda,
               double kappa);

// Empirical regularized effective dimensions:
//   n2 = sqrt(sum_i (ev_i/(ev_i+lambda))^2),  n1 = sum_i ev_i/(ev_i+lambda)
double n2_hat(const EigenSystem& es, double lambda);
double n1_hat(const EigenSystem& es, double lambda);

}  // namespace gof
