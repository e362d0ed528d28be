#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gof/kernels.hpp"
#include "gof/rng.hpp"

namespace gof {

enum class DistFamily {
  UniformCube,       // uniform on [0,1]^d
  PerturbedUniform,  // uniform plus a grid of smooth dipole bumps
  Gaussian,          // N(shift * e_1, scale * I_d)
  SphereUniform,     // uniform on S^{d-1} in R^d
  Vmf,               // von Mises-Fisher on S^{d-1}
  WatsonMixture      // two-component axial Watson mixture on S^{d-1}
};

struct DistributionSpec {
  DistFamily family = DistFamily::UniformCube;
  int dim = 1;  // ambient dimension; sphere families live on S^{dim-1}

  // perturbed uniform
  int perturbations = 1;     // cells per axis (P)
  double amplitude = -1.0;   // <= 0 means the default 2.7 * P^{-d/2}, clipped

  // gaussian
  double shift = 0.0;  // mean shift along the first coordinate
  double scale = 1.0;  // variance multiplier on the identity covariance

  // vmf / watson
  double concentration = 0.0;
  std::vector<double> mean_direction;  // vmf; empty = north pole e_d

  std::string label() const;
};

// Parses "family:key=value,key=value", e.g. "gaussian:d=2,shift=0.5",
// "perturbed_uniform:d=1,perturbations=3", "vmf:d=3,concentration=2".
DistributionSpec parse_distribution(const std::string& text);

// One sample per row.
Matrix sample(const DistributionSpec& spec, int count, RngStream& rng);

double density(const DistributionSpec& spec,
               const Eigen::Ref<const Vector>& x);

// Effective bump amplitude of the perturbed uniform after clipping; the
// density is bounded by 1 +- amp * exp(-d).
double perturbation_amplitude(const DistributionSpec& spec);

// mean resultant length E[mu^T X] of a vMF sample; equals
// coth(k) - 1/k in dimension 3 (0 at k = 0).
double vmf_mean_resultant(int dim, double concentration);

}  // namespace gof
