#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace gof {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Errors surfaced to the command line: bad parameters/settings vs. unusable
// input data.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class KernelFamily { Gaussian, PeriodicSpline, FiniteRank };

// Bounded positive-definite kernel.  Samples are row-major: one point per
// row.  The periodic spline and finite-rank families act on scalars in
// [0,1]; the Gaussian family acts on R^d.
class Kernel {
 public:
  // K(x,y) = exp(-|x-y|^2 / (2h)), h > 0 on the squared-distance scale.
  static Kernel gaussian(double bandwidth);

  // Periodic Sobolev spline on [0,1).  For order r:
  //   K(x,y) = (-1)^{r-1} / (2r)! * B_{2r}({x-y})
  // with B_{2r} the Bernoulli polynomial and {t} the fractional part.
  // Only r = 1 is implemented: K(x,y) = (t^2 - t + 1/6)/2, t = {x-y}.
  static Kernel periodic_spline(int order = 1);

  // K(x,y) = sum_j ev[j] * phi_j(x) phi_j(y) over the trigonometric basis
  // phi_{2i}(x) = sqrt(2) cos(2 pi (i+1) x), phi_{2i+1} = sqrt(2) sin(...).
  // Rank equals ev.size().  Used as a ground-truth target where the Mercer
  // decomposition must be known exactly.
  static Kernel finite_rank(std::vector<double> eigenvalues);

  double operator()(const Eigen::Ref<const Vector>& x,
                    const Eigen::Ref<const Vector>& y) const;

  // Cross-Gram matrix K(A_i, B_j), rows of A against rows of B.
  Matrix gram(const Eigen::Ref<const Matrix>& A,
              const Eigen::Ref<const Matrix>& B) const;

  // Uniform bound kappa with sup_x K(x,x) <= kappa.
  double bound() const;

  KernelFamily family() const { return family_; }
  double bandwidth() const { return bandwidth_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  std::string name() const;

 private:
  Kernel() = default;
  KernelFamily family_ = KernelFamily::Gaussian;
  double bandwidth_ = 1.0;             // Gaussian only
  int order_ = 1;                      // spline only
  std::vector<double> eigenvalues_;    // finite rank only
};

// Median of squared euclidean distances over all unordered distinct pairs of
// the pooled sample (rows of X stacked over rows of X0).  Even pair counts
// take the mean of the two central order statistics.
double median_heuristic(const Eigen::Ref<const Matrix>& X,
                        const Eigen::Ref<const Matrix>& X0);

// Geometric doubling grid {lo * 2^i : lo * 2^i <= hi}, lo <= hi.
std::vector<double> doubling_grid(double lo, double hi);

// Bandwidth grid {w_lo * h * 2^i} capped at w_hi * h.
std::vector<double> bandwidth_grid(double h_median, double w_lo, double w_hi);

}  // namespace gof
