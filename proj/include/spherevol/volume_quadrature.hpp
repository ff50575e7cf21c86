#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "spherevol/sphere_core.hpp"

namespace spherevol {

/// Controls for integrals over the punctured sphere.
///
/// The latitude range |alpha| <= pi/2 - eps is split into n_alpha equal
/// panels carrying gl_order Gauss-Legendre nodes each; longitude uses the
/// n_beta-point periodic trapezoid rule. The truncated integrals at the
/// cutoffs in cutoff_sequence are extrapolated to eps = 0.
struct QuadratureConfig {
  int n_alpha = 32;
  int gl_order = 12;
  int n_beta = 64;
  double pole_cutoff = 1e-2;
  std::vector<double> cutoff_sequence{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  double rel_tol = 1e-6;

  // Throws InvalidArgument when any invariant fails.
  void validate() const;
};

struct VolumeResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  std::vector<std::pair<double, double>> per_cutoff;  // (eps, truncated value)
};

// Density with respect to the area form nu = cos(a) da db.
using SphereDensity = std::function<double(double alpha, double beta)>;

// Integral of `density` over |alpha| <= pi/2 - eps.
double truncated_sphere_integral(const SphereDensity& density, double eps,
                                 const QuadratureConfig& cfg);

// Improper integral over the punctured sphere with cutoff extrapolation.
// Never throws NotConverged; the flag reports it instead.
VolumeResult sphere_integral(const SphereDensity& density, const QuadratureConfig& cfg);

// Volume of the unit vector field: integral of volume_integrand.
// Throws NotConverged when the extrapolation error exceeds rel_tol * value.
VolumeResult volume(const AngleField& f, const QuadratureConfig& cfg = {});

// 4 pi: the volume of any unit field is at least the area of the sphere.
double volume_lower_floor();

}  // namespace spherevol
