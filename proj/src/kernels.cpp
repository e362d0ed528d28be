#include "gof/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gof {

namespace {

double frac(double t) { return t - std::floor(t); }

// (t^2 - t + 1/6)/2 for t = {x-y}; max 1/12 at t=0, min -1/24 at t=1/2.
double spline1(double x, double y) {
  double t = frac(x - y);
  return 0.5 * (t * t - t + 1.0 / 6.0);
}

void check_unit_interval(double v) {
  if (v < 0.0 || v > 1.0)
    throw DataError("periodic spline kernel requires inputs in [0,1]");
}

}  // namespace

Kernel Kernel::gaussian(double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw ConfigError("gaussian kernel: bandwidth must be positive");
  Kernel k;
  k.family_ = KernelFamily::Gaussian;
  k.bandwidth_ = bandwidth;
  return k;
}

Kernel Kernel::periodic_spline(int order) {
  if (order != 1)
    throw ConfigError("periodic spline kernel: only order 1 is implemented");
  Kernel k;
  k.family_ = KernelFamily::PeriodicSpline;
  k.order_ = order;
  return k;
}

Kernel Kernel::finite_rank(std::vector<double> eigenvalues) {
  if (eigenvalues.empty())
    throw ConfigError("finite rank kernel: need at least one eigenvalue");
  for (double ev : eigenvalues)
    if (!(ev >= 0.0) || !std::isfinite(ev))
      throw ConfigError("finite rank kernel: eigenvalues must be >= 0");
  Kernel k;
  k.family_ = KernelFamily::FiniteRank;
  k.eigenvalues_ = std::move(eigenvalues);
  return k;
}

// Trigonometric basis function j at x; orthonormal and mean zero under the
// uniform distribution on [0,1].
static double trig_basis(int j, double x) {
  int freq = j / 2 + 1;
  double arg = 2.0 * M_PI * freq * x;
  return (j % 2 == 0) ? std::sqrt(2.0) * std::cos(arg)
                      : std::sqrt(2.0) * std::sin(arg);
}

double Kernel::operator()(const Eigen::Ref<const Vector>& x,
                          const Eigen::Ref<const Vector>& y) const {
  if (x.size() != y.size())
    throw DataError("kernel: dimension mismatch between inputs");
  switch (family_) {
    case KernelFamily::Gaussian: {
      double d2 = (x - y).squaredNorm();
      return std::exp(-d2 / (2.0 * bandwidth_));
    }
    case KernelFamily::PeriodicSpline: {
      if (x.size() != 1)
        throw DataError("periodic spline kernel requires scalar inputs");
      check_unit_interval(x[0]);
      check_unit_interval(y[0]);
      return spline1(x[0], y[0]);
    }
    case KernelFamily::FiniteRank: {
      if (x.size() != 1)
        throw DataError("finite rank kernel requires scalar inputs");
      double acc = 0.0;
      for (std::size_t j = 0; j < eigenvalues_.size(); ++j)
        acc += eigenvalues_[j] * trig_basis(static_cast<int>(j), x[0]) *
               trig_basis(static_cast<int>(j), y[0]);
      return acc;
    }
  }
  throw std::logic_error("unreachable");
}

Matrix Kernel::gram(const Eigen::Ref<const Matrix>& A,
                    const Eigen::Ref<const Matrix>& B) const {
  if (A.rows() == 0 || B.rows() == 0)
    throw DataError("gram: empty sample");
  if (A.cols() != B.cols())
    throw DataError("gram: dimension mismatch between samples");

  if (family_ == KernelFamily::Gaussian) {
    Vector a2 = A.rowwise().squaredNorm();
    Vector b2 = B.rowwise().squaredNorm();
    Matrix d2 = a2.replicate(1, B.rows()) + b2.transpose().replicate(A.rows(), 1)
                - 2.0 * A * B.transpose();
    return (d2.array().max(0.0) * (-1.0 / (2.0 * bandwidth_))).exp();
  }

  if (A.cols() != 1)
    throw DataError("gram: this kernel family requires scalar inputs");
  Matrix K(A.rows(), B.rows());
  if (family_ == KernelFamily::PeriodicSpline) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) check_unit_interval(A(i, 0));
    for (Eigen::Index j = 0; j < B.rows(); ++j) check_unit_interval(B(j, 0));
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      for (Eigen::Index j = 0; j < B.rows(); ++j)
        K(i, j) = spline1(A(i, 0), B(j, 0));
    return K;
  }
  // finite rank: K = F_A diag(ev) F_B^T through the explicit features
  Matrix FA(A.rows(), static_cast<Eigen::Index>(eigenvalues_.size()));
  Matrix FB(B.rows(), static_cast<Eigen::Index>(eigenvalues_.size()));
  for (std::size_t j = 0; j < eigenvalues_.size(); ++j) {
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      FA(i, static_cast<Eigen::Index>(j)) =
          trig_basis(static_cast<int>(j), A(i, 0));
    for (Eigen::Index i = 0; i < B.rows(); ++i)
      FB(i, static_cast<Eigen::Index>(j)) =
          trig_basis(static_cast<int>(j), B(i, 0));
  }
  Vector ev = Eigen::Map<const Vector>(eigenvalues_.data(),
                                       static_cast<Eigen::Index>(
                                           eigenvalues_.size()));
  return FA * ev.asDiagonal() * FB.transpose();
}

double Kernel::bound() const {
  switch (family_) {
    case KernelFamily::Gaussian:
      return 1.0;
    case KernelFamily::PeriodicSpline:
      return 1.0 / 12.0;
    case KernelFamily::FiniteRank: {
      // K(x,x) = sum ev_j phi_j(x)^2 <= 2 sum ev_j
      double s = 0.0;
      for (double ev : eigenvalues_) s += ev;
      return 2.0 * s;
    }
  }
  throw std::logic_error("unreachable");
}

std::string Kernel::name() const {
  switch (family_) {
    case KernelFamily::Gaussian:
      return "gaussian(h=" + std::to_string(bandwidth_) + ")";
    case KernelFamily::PeriodicSpline:
      return "spline(r=" + std::to_string(order_) + ")";
    case KernelFamily::FiniteRank:
      return "finite_rank(q=" + std::to_string(eigenvalues_.size()) + ")";
  }
  return "";
}

double median_heuristic(const Eigen::Ref<const Matrix>& X,
                        const Eigen::Ref<const Matrix>& X0) {
  if (X.cols() != X0.cols())
    throw DataError("median_heuristic: dimension mismatch");
  Eigen::Index n = X.rows() + X0.rows();
  if (n < 2) throw DataError("median_heuristic: need at least two points");
  Matrix P(n, X.cols());
  P << X, X0;

  std::vector<double> d2;
  d2.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      d2.push_back((P.row(i) - P.row(j)).squaredNorm());

  std::size_t mid = d2.size() / 2;
  std::nth_element(d2.begin(), d2.begin() + mid, d2.end());
  double hi = d2[mid];
  if (d2.size() % 2 == 1) {
    if (hi <= 0.0)
      throw DataError("median_heuristic: degenerate sample (zero median)");
    return hi;
  }
  double lo = *std::max_element(d2.begin(), d2.begin() + mid);
  double med = 0.5 * (lo + hi);
  if (med <= 0.0)
    throw DataError("median_heuristic: degenerate sample (zero median)");
  return med;
}

std::vector<double> doubling_grid(double lo, double hi) {
  if (!(lo > 0.0) || !(hi >= lo))
    throw ConfigError("doubling_grid: need 0 < lo <= hi");
  std::vector<double> g;
  // small headroom so hi = lo * 2^k exactly lands on the grid despite
  // floating-point rounding
  for (double v = lo; v <= hi * (1.0 + 1e-12); v *= 2.0) g.push_back(v);
  return g;
}

std::vector<double> bandwidth_grid(double h_median, double w_lo, double w_hi) {
  if (!(h_median > 0.0))
    throw ConfigError("bandwidth_grid: median bandwidth must be positive");
  return doubling_grid(w_lo * h_median, w_hi * h_median);
}

}  // namespace gof
