#pragma once

#include <array>
#include <optional>

#include "spherevol/sphere_core.hpp"
#include "spherevol/volume_quadrature.hpp"

namespace spherevol {

enum class Pole { North, South };

struct IndexOptions {
  int n_samples = 512;
  double delta0 = 0.05;  // colatitude of the sampling circle, radians
};

/// Poincare index of the field at a pole.
///
/// Samples the field on the circle at angular distance delta0 from the pole,
/// maps every vector through the differential of the stereographic chart
/// centred at that pole, unwraps the chart angle and counts turns. Throws
/// UnwrapAmbiguous when two consecutive samples differ by nearly pi or the
/// total is not within 0.1 of an integer. Aliasing cannot always be seen:
/// n_samples must comfortably exceed twice the index being measured.
int poincare_index(const AngleField& f, Pole pole, const IndexOptions& opts = {});

struct IndexReport {
  int index_north = 0;
  int index_south = 0;
  int sup_index = 0;
  int samples_used = 0;
};

// Both indices; throws PoincareHopfViolation unless they sum to 2.
IndexReport index_report(const AngleField& f, const IndexOptions& opts = {});

// Line integral of the pulled-back connection form i*w12 = tan(a) + theta_1
// over the parallel at latitude alpha (arc length cos(a) db), by the
// periodic trapezoid rule.
double connection_pullback_integral(const AngleField& f, double alpha, int n_beta = 512);

// L(xi_k): integral over [0, 2pi] of sqrt((k-2)^2 + 4(k-1) sin^2 t), as four
// quarter periods of composite Gauss-Legendre.
double ellipse_length(int k);

// Same perimeter as 4 k E(e), e^2 = 1 - (k-2)^2 / k^2, with E from the
// arithmetic-geometric mean.
double ellipse_length_agm(int k);

// Complete elliptic integral of the second kind E(m), parameter m = e^2.
double complete_elliptic_e(double m);

// pi * L(xi_k)
double lower_bound(int k);

struct BoundReport {
  double volume = 0.0;
  double error_estimate = 0.0;
  int k = 0;
  double bound = 0.0;
  double margin = 0.0;
  bool violation = false;
  // k <= 2 lies outside the hypothesis k > 2 under which the bound is stated.
  bool beyond_stated_hypothesis = false;
  IndexReport indices;
};

BoundReport verify_bound(const AngleField& f, const QuadratureConfig& cfg = {},
                         const IndexOptions& index_opts = {});

/// The five sphere integrals of the lower-bound argument, in order:
///   1. sqrt(1 + A^2 + theta_2^2)          A = tan(a) + theta_1
///   2. sqrt(1 + A^2)
///   3. cos(phi_k) + sin(phi_k) |A|        tan(phi_k) = tan(a) + (k-1)/cos(a)
///   4. cos(phi_k) + sin(phi_k) A
///   5. pi L(xi_k)
struct ChainAudit {
  int k = 0;
  bool mirrored = false;  // poles relabelled so that the index k sits at N
  bool beyond_stated_hypothesis = false;
  std::array<double, 5> values{};
  std::array<double, 5> errors{};
  double tolerance = 0.0;
  // 1-based position of the first link i -> i+1 with values[i] > values[i-1]
  // beyond tolerance, i.e. link 3 means element 4 exceeds element 3.
  std::optional<int> first_violation;

  bool monotone() const { return !first_violation.has_value(); }
  // Every element within tolerance of every other.
  bool all_equal() const;
  // Throws ChainViolation naming first_violation.
  void require_monotone() const;
};

// k must equal 1 + |winding| (the larger of the two indices).
ChainAudit audit_chain(const AngleField& f, int k, const QuadratureConfig& cfg = {});

}  // namespace spherevol
