#pragma once

#include <functional>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace spherevol {

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Minimum |cos(alpha)| accepted by frame_at.
inline constexpr double kPoleGuard = 1e-9;

/// Point of the punctured sphere in latitude/longitude.
///
/// alpha is the latitude, strictly inside (-pi/2, pi/2); beta is stored
/// reduced to [0, 2pi).
class SphericalPoint {
 public:
  SphericalPoint(double alpha, double beta);

  static SphericalPoint from_cartesian(const Vec3& x);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  // (cos a cos b, cos a sin b, sin a)
  Vec3 embed() const;

 private:
  double alpha_;
  double beta_;
};

/// Global orthonormal frame of the punctured sphere.
///
/// e1 = (-sin b, cos b, 0) points east along the parallel and
/// e2 = dp/dalpha points north along the meridian, so that e1 x e2 = p.
/// With this orientation g(nabla_e1 e1, e2) = tan(alpha).
struct Frame {
  Vec3 e1;
  Vec3 e2;
};

Frame frame_at(const SphericalPoint& p);

// Frame formula evaluated without the pole guard. At alpha = +-pi/2 it
// returns the limit along the meridian beta.
Frame frame_from_angles(double alpha, double beta);

struct AnglePartials {
  double d_alpha = 0.0;  // d theta / d alpha
  double d_beta = 0.0;   // d theta / d beta
};

/// A unit vector field v = cos(theta) e1 + sin(theta) e2, stored as its angle.
///
/// The winding w is part of the representation:
/// theta(alpha, beta + 2pi) = theta(alpha, beta) + 2 pi w. The field has
/// Poincare index 1 + w at N and 1 - w at S.
class AngleField {
 public:
  using ThetaFn = std::function<double(double alpha, double beta)>;
  using PartialsFn = std::function<AnglePartials(double alpha, double beta)>;

  AngleField(ThetaFn theta, int winding, PartialsFn partials = {},
             double fd_step = 1e-5);

  double theta(double alpha, double beta) const { return theta_(alpha, beta); }
  int winding() const { return winding_; }
  double fd_step() const { return fd_step_; }
  bool has_analytic_partials() const { return static_cast<bool>(partials_); }

  // Analytic partials when available, otherwise central differences.
  AnglePartials partials(double alpha, double beta) const;
  AnglePartials fd_partials(double alpha, double beta, double h) const;

  // theta_1 = d theta(e1) = (1 / cos a) d theta / d beta
  double d_e1(double alpha, double beta) const;
  // theta_2 = d theta(e2) = d theta / d alpha
  double d_e2(double alpha, double beta) const;

  AngleField with_fd_step(double h) const;
  // Same angle function with the analytic provider dropped.
  AngleField without_analytic_partials() const;

  // theta + c. Rotates every vector by c inside its tangent plane.
  AngleField offset(double c) const;
  // Field rotated about the z-axis by b0: theta'(a, b) = theta(a, b - b0).
  AngleField rotated_about_z(double b0) const;
  // Mirror image under (x, y, z) -> (x, y, -z): theta'(a, b) = -theta(-a, b).
  // Swaps the indices at N and S.
  AngleField mirrored() const;
  // theta + g, where g is a 2pi-periodic function of beta with known partials.
  AngleField plus(ThetaFn g, PartialsFn g_partials) const;

 private:
  ThetaFn theta_;
  int winding_;
  PartialsFn partials_;
  double fd_step_;
};

Vec3 field_vector(const AngleField& f, const SphericalPoint& p);

struct GeodesicCurvatures {
  double gamma = 0.0;  // g(nabla_v v, v_perp)
  double delta = 0.0;  // g(nabla_{v_perp} v_perp, v)
};

GeodesicCurvatures geodesic_curvatures(const AngleField& f, const SphericalPoint& p);

// sqrt(1 + (tan a + theta_1)^2 + theta_2^2); area density of the graph of
// the field in the unit tangent bundle with respect to the sphere area form.
double volume_integrand(const AngleField& f, const SphericalPoint& p);

// Same density on the unguarded (alpha, beta) chart; used by quadrature.
double volume_integrand(const AngleField& f, double alpha, double beta);

}  // namespace spherevol
