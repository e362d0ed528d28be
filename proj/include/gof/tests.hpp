#pragma once

#include <string>
#include <vector>

#include "gof/rng.hpp"
#include "gof/statistics.hpp"

namespace gof {

struct GridCellResult {
  double lambda = 0.0;
  std::string kernel;
  double statistic = 0.0;
  double critical_value = 0.0;
  bool reject = false;
};

struct TestOutcome {
  std::string method;
  bool reject = false;
  double statistic = 0.0;       // for grid tests: the deciding cell's value
  double critical_value = 0.0;  // threshold the decision compared against
  double alpha = 0.0;
  std::vector<GridCellResult> per_grid;
};

// Lower concentration constant of the conditional-variance threshold,
//   b1 = sqrt(4/9 - 16/(3 sqrt(3 c1)) - 32/(9 c1)),
// real and positive for c1 >= 65.
double b1_constant(double c1);

// Number of random permutations used for calibration; substreams 1..count of
// `stream` drive the individual shuffles, so the plan is reproducible and
// permutation i never depends on how many others were generated.
struct PermutationPlan {
  int count = 60;
  RngStream stream{0};
};

// Shared machinery of the permutation tests: Gram blocks of the pooled
// sample against itself and against the covariance sample are computed once;
// any reassignment of pooled rows into (X, X0) is then evaluated in
// O((n + m) s + n^2) per lambda grid.  The eigensystem is permutation
// invariant, so it is also computed once.
class PooledStatEvaluator {
 public:
  PooledStatEvaluator(const Kernel& kernel, const Regularizer& reg,
                      const Eigen::Ref<const Matrix>& pooled, int n, int m,
                      const Eigen::Ref<const Matrix>& Y0,
                      std::vector<double> lambdas);

  // identity assignment: first n pooled rows are X
  std::vector<double> observed() const;

  // perm is a permutation of 0..n+m-1; rows perm[0..n) become X
  std::vector<double> permuted(const std::vector<int>& perm) const;

  const std::vector<double>& lambdas() const { return lambdas_; }
  double n2(int lambda_index) const;
  const EigenSystem& eigensystem() const { return es_; }

 private:
  std::vector<double> from_index_set(const int* idx) const;

  int n_, m_;
  std::vector<double> lambdas_;
  std::vector<double> g0_;
  std::vector<Vector> ratios_;
  EigenSystem es_;
  Matrix K_U_;
  Matrix Z_, Zsq_;     // (n+m) x s feature blocks through the eigenbasis
  Vector rowsum_;
  Vector zsum_, zsqsum_;
  double total_ = 0.0, trace_ = 0.0;
};

// Spectral-regularized conditional test: analytic threshold
//   gamma = 12 (c1()+c2()) n2_hat(lambda) / (b1 sqrt(alpha)) (1/n + 1/m).
TestOutcome srct(const Eigen::Ref<const Matrix>& X,
                 const Eigen::Ref<const Matrix>& X0,
                 const Eigen::Ref<const Matrix>& Y0, const Kernel& kernel,
                 const Regularizer& reg, double lambda, double alpha,
                 double c1 = 65.0);

// Spectral-regularized permutation test.  The observed statistic joins the
// `plan.count` permuted copies; with ties counted against rejection the test
// is exactly level alpha.
TestOutcome srpt(const Eigen::Ref<const Matrix>& X,
                 const Eigen::Ref<const Matrix>& X0,
                 const Eigen::Ref<const Matrix>& Y0, const Kernel& kernel,
                 const Regularizer& reg, double lambda, double alpha,
                 const PermutationPlan& plan);

// Exact-spectrum test for a known Mercer decomposition of the null:
//   gamma = 2 (c1()+c2()) population_n2(lambda) / (n sqrt(alpha)).
TestOutcome oracle_test(const Eigen::Ref<const Matrix>& X,
                        const Regularizer& reg, double lambda, double alpha,
                        const MercerSpectrum& spectrum, int k_max = 0);

// Mean-discrepancy test with analytic null embedding:
//   gamma = 4 kappa / (sqrt(alpha) n).
TestOutcome mmd_test(const Eigen::Ref<const Matrix>& X, const Kernel& kernel,
                     const ClosedFormNull& null, double alpha);

// Union over the lambda grid of normalized statistics eta/n2_hat(lambda) at
// the Bonferroni-corrected level alpha/|grid|.
TestOutcome adaptive_srct(const Eigen::Ref<const Matrix>& X,
                          const Eigen::Ref<const Matrix>& X0,
                          const Eigen::Ref<const Matrix>& Y0,
                          const Kernel& kernel, const Regularizer& reg,
                          const std::vector<double>& lambdas, double alpha,
                          double c1 = 65.0);

// Union over (lambda, kernel) cells of per-cell permutation tests at level
// alpha / (|lambdas| * |kernels|); one shared permutation stream across all
// cells.  Warns on stderr when plan.count is too small for any cell to be
// rejectable, i.e. plan.count + 1 < |cells| / alpha.
TestOutcome adaptive_srpt(const Eigen::Ref<const Matrix>& X,
                          const Eigen::Ref<const Matrix>& X0,
                          const Eigen::Ref<const Matrix>& Y0,
                          const std::vector<Kernel>& kernels,
                          const Regularizer& reg,
                          const std::vector<double>& lambdas, double alpha,
                          const PermutationPlan& plan);

// Permutation-calibrated energy distance baseline.
TestOutcome energy_perm_test(const Eigen::Ref<const Matrix>& X,
                             const Eigen::Ref<const Matrix>& X0, double alpha,
                             const PermutationPlan& plan);

}  // namespace gof
