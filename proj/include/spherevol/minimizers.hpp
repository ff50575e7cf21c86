#pragma once

#include <cstdint>
#include <vector>

#include "spherevol/grid_field.hpp"
#include "spherevol/sphere_core.hpp"

namespace spherevol {

// theta = (k - 1) beta + theta0, with analytic partials. The default
// theta0 = pi/2 makes k = 1 the meridian field e2. Indices (k, 2 - k).
AngleField canonical_field(int k, double theta0 = kPi / 2);

// 2 pi * integral over (-pi/2, pi/2) of sqrt(1 + (k-1)^2 + 2 (k-1) sin a).
double closed_form_volume(int k);

// Canonical field plus a smooth seeded perturbation of sup-norm at most
// `amplitude`, periodic in beta (winding preserved), analytic partials.
AngleField perturbed_field(int k, double amplitude, std::uint64_t seed);

// Canonical grid plus independent uniform noise in [-amplitude, amplitude].
GridField noisy_canonical_grid(int k, int n_alpha, int n_beta, double amplitude,
                               std::uint64_t seed);

/// Discrete volume on a GridField.
///
/// Each lattice cell between rows i, i+1 is split into two linear
/// triangles; the integrand is sampled at the strip's mid-latitude and
/// weighted by cos(a) da db / 2. The half-width strips between the outer
/// rows and the poles use the row's beta differences with theta_alpha = 0.
struct DiscreteObjective {
  double value = 0.0;
  std::vector<double> gradient;  // same layout as GridField::values()
};

DiscreteObjective discrete_volume(const GridField& g, bool with_gradient = true);

// |discrete volume of the canonical grid - pi L(xi_k)|.
double discretization_tolerance(int k, int n_alpha, int n_beta);

struct OptimizeOptions {
  int max_iters = 5000;
  double grad_tol = 1e-6;
  double armijo = 1e-4;
  double initial_step = 1.0;
  double stall_threshold = 1e-14;
};

struct OptimizeResult {
  GridField field;
  std::vector<double> trace;  // objective before iteration 0 and after each step
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;     // grad_norm <= grad_tol
  double bound = 0.0;         // pi L(xi_k)
  double tol_disc = 0.0;
};

// Gradient descent with Armijo backtracking at fixed winding k - 1. Throws
// LineSearchStalled when no trial step lowers the objective by more than
// stall_threshold while the gradient is still above grad_tol.
OptimizeResult optimize_field(int k, const GridField& init, const OptimizeOptions& opts = {});

}  // namespace spherevol
