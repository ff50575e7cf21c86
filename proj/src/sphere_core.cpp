#include "spherevol/sphere_core.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "spherevol/errors.hpp"

namespace spherevol {

namespace {

double reduce_longitude(double beta) {
  double b = std::fmod(beta, kTwoPi);
  if (b < 0.0) b += kTwoPi;
  if (b >= kTwoPi) b = 0.0;
  return b;
}

}  // namespace

SphericalPoint::SphericalPoint(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw InvalidArgument("spherical point: non-finite coordinate");
  }
  if (!(std::abs(alpha) < kPi / 2)) {
    throw InvalidArgument("spherical point: latitude " + std::to_string(alpha) +
                          " is not inside (-pi/2, pi/2)");
  }
  alpha_ = alpha;
  beta_ = reduce_longitude(beta);
}

SphericalPoint SphericalPoint::from_cartesian(const Vec3& x) {
  const double n = x.norm();
  if (!(n > 0.0)) throw InvalidArgument("spherical point: zero vector");
  const Vec3 u = x / n;
  const double rho = std::hypot(u.x(), u.y());
  if (rho == 0.0) throw InvalidArgument("spherical point: pole has no longitude");
  return SphericalPoint(std::atan2(u.z(), rho), std::atan2(u.y(), u.x()));
}

Vec3 SphericalPoint::embed() const {
  const double ca = std::cos(alpha_);
  return {ca * std::cos(beta_), ca * std::sin(beta_), std::sin(alpha_)};
}

Frame frame_from_angles(double alpha, double beta) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  return {Vec3(-sb, cb, 0.0), Vec3(-sa * cb, -sa * sb, ca)};
}

Frame frame_at(const SphericalPoint& p) {
  if (std::abs(std::cos(p.alpha())) < kPoleGuard) {
    throw InvalidArgument("frame_at: point too close to a pole");
  }
  // Cartesian form: e1 = (-y, x, 0) / rho, e2 = (-xz, -yz, rho^2) / rho.
  const Vec3 x = p.embed();
  const double rho = std::hypot(x.x(), x.y());
  return {Vec3(-x.y() / rho, x.x() / rho, 0.0),
          Vec3(-x.x() * x.z() / rho, -x.y() * x.z() / rho, rho)};
}

AngleField::AngleField(ThetaFn theta, int winding, PartialsFn partials, double fd_step)
    : theta_(std::move(theta)),
      winding_(winding),
      partials_(std::move(partials)),
      fd_step_(fd_step) {
  if (!theta_) throw InvalidArgument("angle field: empty angle function");
  if (!(fd_step_ > 0.0)) throw InvalidArgument("angle field: derivative step must be positive");
}

AnglePartials AngleField::fd_partials(double alpha, double beta, double h) const {
  return {(theta_(alpha + h, beta) - theta_(alpha - h, beta)) / (2.0 * h),
          (theta_(alpha, beta + h) - theta_(alpha, beta - h)) / (2.0 * h)};
}

AnglePartials AngleField::partials(double alpha, double beta) const {
  if (partials_) return partials_(alpha, beta);
  return fd_partials(alpha, beta, fd_step_);
}

double AngleField::d_e1(double alpha, double beta) const {
  return partials(alpha, beta).d_beta / std::cos(alpha);
}

double AngleField::d_e2(double alpha, double beta) const {
  return partials(alpha, beta).d_alpha;
}

AngleField AngleField::with_fd_step(double h) const {
  return AngleField(theta_, winding_, partials_, h);
}

AngleField AngleField::without_analytic_partials() const {
  return AngleField(theta_, winding_, {}, fd_step_);
}

AngleField AngleField::offset(double c) const {
  auto th = theta_;
  return AngleField([th, c](double a, double b) { return th(a, b) + c; }, winding_,
                    partials_, fd_step_);
}

AngleField AngleField::rotated_about_z(double b0) const {
  auto th = theta_;
  PartialsFn dp;
  if (partials_) {
    auto pp = partials_;
    dp = [pp, b0](double a, double b) { return pp(a, b - b0); };
  }
  return AngleField([th, b0](double a, double b) { return th(a, b - b0); }, winding_, dp,
                    fd_step_);
}

AngleField AngleField::mirrored() const {
  auto th = theta_;
  PartialsFn dp;
  if (partials_) {
    auto pp = partials_;
    dp = [pp](double a, double b) {
      const AnglePartials q = pp(-a, b);
      return AnglePartials{q.d_alpha, -q.d_beta};
    };
  }
  return AngleField([th](double a, double b) { return -th(-a, b); }, -winding_, dp,
                    fd_step_);
}

AngleField AngleField::plus(ThetaFn g, PartialsFn g_partials) const {
  auto th = theta_;
  PartialsFn dp;
  if (partials_ && g_partials) {
    auto pp = partials_;
    dp = [pp, g_partials](double a, double b) {
      const AnglePartials x = pp(a, b), y = g_partials(a, b);
      return AnglePartials{x.d_alpha + y.d_alpha, x.d_beta + y.d_beta};
    };
  }
  return AngleField([th, g](double a, double b) { return th(a, b) + g(a, b); }, winding_, dp,
                    fd_step_);
}

Vec3 field_vector(const AngleField& f, const SphericalPoint& p) {
  const Frame fr = frame_at(p);
  const double th = f.theta(p.alpha(), p.beta());
  return std::cos(th) * fr.e1 + std::sin(th) * fr.e2;
}

GeodesicCurvatures geodesic_curvatures(const AngleField& f, const SphericalPoint& p) {
  const double a = p.alpha(), b = p.beta();
  const double th = f.theta(a, b);
  const AnglePartials d = f.partials(a, b);
  const double t1 = d.d_beta / std::cos(a);
  const double t2 = d.d_alpha;
  const double along = std::tan(a) + t1;
  return {std::cos(th) * along + std::sin(th) * t2, std::sin(th) * along - std::cos(th) * t2};
}

double volume_integrand(const AngleField& f, double alpha, double beta) {
  const AnglePartials d = f.partials(alpha, beta);
  const double along = std::tan(alpha) + d.d_beta / std::cos(alpha);
  return std::sqrt(1.0 + along * along + d.d_alpha * d.d_alpha);
}

double volume_integrand(const AngleField& f, const SphericalPoint& p) {
  return volume_integrand(f, p.alpha(), p.beta());
}

}  // namespace spherevol
