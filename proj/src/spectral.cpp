#include "gof/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace gof {

EigenSystem centered_eigensystem(const Eigen::Ref<const Matrix>& K_s,
                                 double kappa) {
  const Eigen::Index s = K_s.rows();
  if (s < 2 || K_s.cols() != s)
    throw DataError("centered_eigensystem: K_s must be square with s >= 2");
  double scale = K_s.cwiseAbs().maxCoeff();
  if (!K_s.isApprox(K_s.transpose(), 1e-10))
    throw DataError("centered_eigensystem: K_s is not symmetric");
  if (kappa <= 0.0) kappa = std::max(K_s.diagonal().maxCoeff(), scale * 1e-3);
  if (kappa <= 0.0) kappa = 1.0;

  // (1/s) Ht^{1/2} K Ht^{1/2} = (1/(s-1)) H K H; double centering avoids
  // forming H.  H is idempotent, so no matrix square root appears.
  Vector rmean = K_s.rowwise().mean();
  double gmean = rmean.mean();
  Matrix C = K_s;
  C.colwise() -= rmean;
  C.rowwise() -= rmean.transpose();
  C.array() += gmean;
  C /= static_cast<double>(s - 1);
  C = ((C + C.transpose()) / 2.0).eval();  // kill rounding asymmetry

  Eigen::SelfAdjointEigenSolver<Matrix> solver(C);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("centered_eigensystem: eigensolver failed");

  EigenSystem es;
  es.s = static_cast<int>(s);
  es.values = solver.eigenvalues().reverse();
  es.vectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index i = 0; i < s; ++i) {
    if (es.values[i] < -1e-10 * kappa)
      throw DataError("centered_eigensystem: eigenvalue below rounding floor; "
                      "Gram matrix is not positive semidefinite");
    if (es.values[i] < 0.0) es.values[i] = 0.0;
  }
  return es;
}

Matrix build_G(const EigenSystem& es, const Regularizer& reg, double lambda,
               double kappa) {
  if (es.s < 2 || es.values.size() != es.s)
    throw std::invalid_argument("build_G: malformed eigensystem");
  Vector r(es.values.size());
  for (Eigen::Index i = 0; i < r.size(); ++i)
    r[i] = reg.diff_ratio(lambda, es.values[i], kappa);
  return es.vectors * r.asDiagonal() * es.vectors.transpose();
}

double n2_hat(const EigenSystem& es, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("n2_hat: lambda must be positive");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    double r = es.values[i] / (es.values[i] + lambda);
    acc += r * r;
  }
  return std::sqrt(acc);
}

double n1_hat(const EigenSystem& es, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("n1_hat: lambda must be positive");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    acc += es.values[i] / (es.values[i] + lambda);
  return acc;
}

}  // namespace gof
