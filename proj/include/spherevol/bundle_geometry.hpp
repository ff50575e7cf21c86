#pragma once

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "spherevol/sphere_core.hpp"

namespace spherevol {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec9 = Eigen::Matrix<double, 9, 1>;

/// Point (p, w) of the unit tangent bundle, |p| = |w| = 1, p . w = 0.
class BundlePoint {
 public:
  BundlePoint(const Vec3& p, const Vec3& w);  // checks the constraints to 1e-12

  const Vec3& p() const { return p_; }
  const Vec3& w() const { return w_; }
  Vec6 stacked() const;

  // Largest violation among | |p| - 1 |, | |w| - 1 |, |p . w|.
  static double constraint_residual(const Vec3& p, const Vec3& w);

 private:
  Vec3 p_;
  Vec3 w_;
};

// (p, w, p x w) / sqrt(2). The Euclidean metric of R^9 pulls back to the
// Sasaki metric on the unit tangent bundle of the round sphere.
Vec9 sasaki_lift(const Vec3& p, const Vec3& w);

// Parallel transport of a tangent vector at N = (0, 0, 1) to p along the
// great circle from N (rotation about N x p). p must not be S.
Vec3 transport_from_north(const Vec3& p, const Vec3& v_at_north);

// Tangent vectors at N that transport to u1 and u2: (0, 1, 0) and (-1, 0, 0).
Vec3 north_u1();
Vec3 north_u2();

struct TransportFrame {
  Vec3 u1;
  Vec3 u2;
};

// Frame transported from N along meridians, normalised so that u = e at
// (1, 0, 0). In terms of e: u1 = cos b e1 - sin b e2, u2 = sin b e1 + cos b e2.
TransportFrame transport_frame(const SphericalPoint& p);

// exp_N(X) with the tangent plane at N identified with R^2 by (x, y, 0), and
// sigma identified by sigma_1 u1(N) + sigma_2 u2(N), then transported.
// Requires |X| < pi/2 and |sigma| = 1.
BundlePoint trivialize(const Vec2& x, const Vec2& sigma);

// j(r, t) = (r cos t, r sin t, cos kt, sin kt); k even, k >= 2.
Vec4 moebius_point(double r, double t, int k);

struct CheckResult {
  bool passed = false;
  int samples = 0;
  double max_error = 0.0;
  std::string detail;
  // (r, t) of the first failing sample
  std::optional<Vec2> witness;
};

// Ruled structure of M_k = G_t O_t U O_t H_t. Part (a) writes every sampled
// j(r, t) as a convex combination on one of the two rulings; part (b) maps
// sampled ruling points back through r' = lambda pi / 2, t' = t + pi and
// requires j(r', t') to reproduce them. Part (b) fails for odd k. Any k >= 1.
CheckResult ruled_decomposition_check(int k, int n_samples, std::uint64_t seed = 1);

// Smallest singular value of the 2 x 4 Jacobian above 1e-8 at every sample,
// including r = 0. The map overload uses central differences.
CheckResult immersion_rank_check(int k, int n_samples);
CheckResult immersion_rank_check(const std::function<Vec4(double, double)>& map,
                                 int n_samples);

/// Mean curvature of the graph F(a, b) = (p(a, b), v(a, b)) inside the unit
/// tangent bundle with the Sasaki metric.
///
/// Works in the R^9 lift: first derivatives are analytic, second derivatives
/// are central differences of them with step h (Richardson-combined with
/// h/2 when `richardson`), the normal is the unit vector of the bundle's
/// tangent space orthogonal to both surface tangents, and
/// H = (g22 L11 - 2 g12 L12 + g11 L22) / (2 det g). Throws DegenerateMetric
/// when det g < 1e-12.
double mean_curvature(const AngleField& f, double alpha, double beta, double h,
                      bool richardson = true);

// Same for the canonical field v_k with theta0 = 0.
double mean_curvature(int k, double alpha, double beta, double h, bool richardson = true);

struct CurvatureScan {
  double sup_abs_h = 0.0;
  double alpha_at_sup = 0.0;
  double beta_at_sup = 0.0;
  int samples = 0;
};

// sup |H| over n_alpha x n_beta samples: rows evenly spaced on
// |alpha| <= pi/2 - collar (endpoints included), columns b_j = 2 pi j / n_beta.
CurvatureScan mean_curvature_scan(const AngleField& f, int n_alpha, int n_beta, double h,
                                  double collar = 0.05, bool richardson = true);

}  // namespace spherevol
