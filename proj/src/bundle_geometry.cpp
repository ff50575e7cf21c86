#include "spherevol/bundle_geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Geometry>

#include "spherevol/errors.hpp"
#include "spherevol/minimizers.hpp"
#include "spherevol/parallel.hpp"

namespace spherevol {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_even_k(int k, const char* where) {
  if (k < 2 || k % 2 != 0) {
    throw InvalidArgument(std::string(where) + ": k must be an even integer >= 2, got " +
                          std::to_string(k));
  }
}

Vec9 stack9(const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec9 out;
  out << a, b, c;
  return out;
}

// Unchecked trivialisation, valid for |X| <= pi/2.
std::pair<Vec3, Vec3> trivialize_closed(const Vec2& x, const Vec2& sigma) {
  const double r = x.norm();
  const Vec3 w_north = sigma.x() * north_u1() + sigma.y() * north_u2();
  if (r == 0.0) return {Vec3(0.0, 0.0, 1.0), w_north};
  const Vec2 dir = x / r;
  const Vec3 p(std::sin(r) * dir.x(), std::sin(r) * dir.y(), std::cos(r));
  return {p, transport_from_north(p, w_north)};
}

struct GraphDerivatives {
  Vec3 p, w;
  Vec9 d_alpha, d_beta;
};

GraphDerivatives graph_derivatives(const AngleField& f, double a, double b) {
  const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b);
  const Vec3 p(ca * cb, ca * sb, sa);
  const Vec3 e1(-sb, cb, 0.0);
  const Vec3 e2(-sa * cb, -sa * sb, ca);
  const Vec3 de1_db(-cb, -sb, 0.0);
  const double th = f.theta(a, b);
  const AnglePartials d = f.partials(a, b);
  const double ct = std::cos(th), st = std::sin(th);
  const Vec3 w = ct * e1 + st * e2;
  const Vec3 jw = -st * e1 + ct * e2;

  const Vec3 p_a = e2;
  const Vec3 p_b = ca * e1;
  const Vec3 w_a = d.d_alpha * jw - st * p;
  const Vec3 w_b = d.d_beta * jw + ct * de1_db - st * sa * e1;
  const Vec3 n_a = p_a.cross(w) + p.cross(w_a);
  const Vec3 n_b = p_b.cross(w) + p.cross(w_b);
  return {p, w, kInvSqrt2 * stack9(p_a, w_a, n_a), kInvSqrt2 * stack9(p_b, w_b, n_b)};
}

double mean_curvature_once(const AngleField& f, double a, double b, double h) {
  const GraphDerivatives c = graph_derivatives(f, a, b);
  const GraphDerivatives ap = graph_derivatives(f, a + h, b);
  const GraphDerivatives am = graph_derivatives(f, a - h, b);
  const GraphDerivatives bp = graph_derivatives(f, a, b + h);
  const GraphDerivatives bm = graph_derivatives(f, a, b - h);
  const Vec9 f_aa = (ap.d_alpha - am.d_alpha) / (2.0 * h);
  const Vec9 f_bb = (bp.d_beta - bm.d_beta) / (2.0 * h);
  const Vec9 f_ab =
      0.5 * ((bp.d_alpha - bm.d_alpha) / (2.0 * h) + (ap.d_beta - am.d_beta) / (2.0 * h));

  const double g11 = c.d_alpha.dot(c.d_alpha);
  const double g12 = c.d_alpha.dot(c.d_beta);
  const double g22 = c.d_beta.dot(c.d_beta);
  const double det = g11 * g22 - g12 * g12;
  if (det < 1e-12) {
    std::ostringstream msg;
    msg << "mean_curvature: metric determinant " << det << " at (" << a << ", " << b << ")";
    throw DegenerateMetric(msg.str());
  }

  // Orthonormal basis of the bundle's tangent space: rotations about p, w, p x w.
  const Vec3 n = c.p.cross(c.w);
  const std::array<Vec3, 3> axes{c.p, c.w, n};
  std::array<Vec9, 3> basis;
  for (int m = 0; m < 3; ++m) {
    const Vec3& om = axes[m];
    basis[m] = kInvSqrt2 * stack9(om.cross(c.p), om.cross(c.w), om.cross(n));
  }
  Vec3 ca_coord, cb_coord;
  for (int m = 0; m < 3; ++m) {
    ca_coord[m] = basis[m].dot(c.d_alpha);
    cb_coord[m] = basis[m].dot(c.d_beta);
  }
  const Vec3 nc = ca_coord.cross(cb_coord).normalized();
  Vec9 normal = nc[0] * basis[0] + nc[1] * basis[1] + nc[2] * basis[2];
  for (int m = 0; m < 9; ++m) {
    if (std::abs(normal[m]) > 1e-12) {
      if (normal[m] < 0.0) normal = -normal;
      break;
    }
  }
  const double l11 = f_aa.dot(normal), l12 = f_ab.dot(normal), l22 = f_bb.dot(normal);
  return (g22 * l11 - 2.0 * g12 * l12 + g11 * l22) / (2.0 * det);
}

}  // namespace

BundlePoint::BundlePoint(const Vec3& p, const Vec3& w) : p_(p), w_(w) {
  const double res = constraint_residual(p, w);
  if (!(res <= 1e-12)) {
    throw InvalidArgument("bundle point: constraint residual " + std::to_string(res));
  }
}

double BundlePoint::constraint_residual(const Vec3& p, const Vec3& w) {
  return std::max({std::abs(p.norm() - 1.0), std::abs(w.norm() - 1.0), std::abs(p.dot(w))});
}

Vec6 BundlePoint::stacked() const {
  Vec6 out;
  out << p_, w_;
  return out;
}

Vec9 sasaki_lift(const Vec3& p, const Vec3& w) {
  return kInvSqrt2 * stack9(p, w, p.cross(w));
}

Vec3 north_u1() { return {0.0, 1.0, 0.0}; }
Vec3 north_u2() { return {-1.0, 0.0, 0.0}; }

Vec3 transport_from_north(const Vec3& p, const Vec3& v) {
  const double rho = std::hypot(p.x(), p.y());
  if (rho == 0.0) {
    if (p.z() > 0.0) return v;
    throw InvalidArgument("transport_from_north: the geodesic to S is not unique");
  }
  const Vec3 axis(-p.y() / rho, p.x() / rho, 0.0);  // N x p, normalised
  const double phi = std::atan2(rho, p.z());
  const double c = std::cos(phi), s = std::sin(phi);
  return v * c + axis.cross(v) * s + axis * axis.dot(v) * (1.0 - c);
}

TransportFrame transport_frame(const SphericalPoint& p) {
  if (std::abs(std::cos(p.alpha())) < kPoleGuard) {
    throw InvalidArgument("transport_frame: point too close to a pole");
  }
  const Vec3 x = p.embed();
  return {transport_from_north(x, north_u1()), transport_from_north(x, north_u2())};
}

BundlePoint trivialize(const Vec2& x, const Vec2& sigma) {
  if (!(x.norm() < kPi / 2)) {
    throw InvalidArgument("trivialize: |X| must be below pi/2");
  }
  const double s = sigma.norm();
  if (std::abs(s - 1.0) > 1e-9) throw InvalidArgument("trivialize: sigma must be a unit vector");
  const auto [p, w] = trivialize_closed(x, sigma / s);
  return BundlePoint(p, w);
}

Vec4 moebius_point(double r, double t, int k) {
  require_even_k(k, "moebius_point");
  Vec4 out;
  out << r * std::cos(t), r * std::sin(t), std::cos(k * t), std::sin(k * t);
  return out;
}

CheckResult ruled_decomposition_check(int k, int n_samples, std::uint64_t seed) {
  if (k < 1) throw InvalidArgument("ruled_decomposition_check: k must be positive");
  if (n_samples < 1) throw InvalidArgument("ruled_decomposition_check: need samples");
  constexpr double kTol = 1e-12;
  auto j = [k](double r, double t) {
    Vec4 q;
    q << r * std::cos(t), r * std::sin(t), std::cos(k * t), std::sin(k * t);
    return q;
  };
  auto ends = [k](double t) {
    Vec4 g, o, h;
    const double c = std::cos(k * t), s = std::sin(k * t);
    g << -kPi / 2 * std::cos(t), -kPi / 2 * std::sin(t), c, s;
    o << 0.0, 0.0, c, s;
    h << kPi / 2 * std::cos(t), kPi / 2 * std::sin(t), c, s;
    return std::array<Vec4, 3>{g, o, h};
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ur(-kPi / 2, kPi / 2), ut(-kPi, kPi), ul(0.0, 1.0);

  CheckResult res;
  res.samples = n_samples;
  auto fail = [&](const std::string& why, double r, double t, double err) {
    res.passed = false;
    res.detail = why;
    res.witness = Vec2(r, t);
    res.max_error = std::max(res.max_error, err);
    return res;
  };

  // (a) M_k inside G_t O_t U O_t H_t
  for (int n = 0; n < n_samples; ++n) {
    const double r = ur(rng), t = ut(rng) + kPi;
    const Vec4 q = j(r, t);
    const auto [g, o, h] = ends(t);
    const Vec4 end = r >= 0.0 ? h : g;
    const Vec4 dir = end - o;
    const double lambda = std::clamp((q - o).dot(dir) / dir.squaredNorm(), 0.0, 1.0);
    const double err =
        std::max((q - (o + lambda * dir)).norm(), std::abs(lambda - 2.0 * std::abs(r) / kPi));
    res.max_error = std::max(res.max_error, err);
    if (err > kTol) return fail("(a) sample is not on its ruling", r, t, err);
  }
  // (b) ruling points back into M_k
  for (int n = 0; n < n_samples; ++n) {
    const double t = ut(rng), lambda = ul(rng);
    const auto [g, o, h] = ends(t);
    const Vec4 q1 = lambda * g + (1.0 - lambda) * o;
    const double r1 = lambda * kPi / 2;
    const double err1 = (j(r1, t + kPi) - q1).norm();
    const Vec4 q2 = (1.0 - lambda) * o + lambda * h;
    const double err2 = (j(lambda * kPi / 2, t) - q2).norm();
    const double err = std::max(err1, err2);
    res.max_error = std::max(res.max_error, err);
    if (err > kTol) {
      std::ostringstream msg;
      msg << "(b) point of G_t O_t at lambda = " << lambda
          << " does not map back into M_k via (r', t') = (lambda pi/2, t + pi); "
          << "cos k(t + pi) = cos kt needs k even";
      return fail(msg.str(), r1, t + kPi, err);
    }
  }
  res.passed = true;
  res.detail = "every sample reconstructed";
  return res;
}

namespace {

double min_singular_value(const Vec4& dr, const Vec4& dt) {
  const double a = dr.squaredNorm(), b = dr.dot(dt), c = dt.squaredNorm();
  const double mean = 0.5 * (a + c);
  const double rad = std::hypot(0.5 * (a - c), b);
  const double big = mean + rad;
  const double det = a * c - b * b;
  const double small = big > 0.0 ? std::max(det / big, 0.0) : 0.0;
  return std::sqrt(small);
}

template <typename JacFn>
CheckResult rank_scan(JacFn jac, int n_samples) {
  if (n_samples < 1) throw InvalidArgument("immersion_rank_check: need samples");
  int nr = std::max(3, static_cast<int>(std::sqrt(static_cast<double>(n_samples))));
  if (nr % 2 == 0) ++nr;  // odd so that r = 0 is a sample row
  const int nt = std::max(1, (n_samples + nr - 1) / nr);
  CheckResult res;
  res.samples = nr * nt;
  res.max_error = std::numeric_limits<double>::infinity();  // smallest singular value seen
  for (int i = 0; i < nr; ++i) {
    const double r = -kPi / 2 + kPi * i / (nr - 1);
    for (int m = 0; m < nt; ++m) {
      const double t = kTwoPi * m / nt;
      const auto [dr, dt] = jac(r, t);
      const double s = min_singular_value(dr, dt);
      res.max_error = std::min(res.max_error, s);
      if (!(s > 1e-8)) {
        std::ostringstream msg;
        msg << "Jacobian rank drops: smallest singular value " << s << " at r = " << r
            << ", t = " << t;
        res.passed = false;
        res.detail = msg.str();
        res.witness = Vec2(r, t);
        return res;
      }
    }
  }
  res.passed = true;
  res.detail = "rank 2 at every sample";
  return res;
}

}  // namespace

CheckResult immersion_rank_check(int k, int n_samples) {
  require_even_k(k, "immersion_rank_check");
  return rank_scan(
      [k](double r, double t) {
        Vec4 dr, dt;
        dr << std::cos(t), std::sin(t), 0.0, 0.0;
        dt << -r * std::sin(t), r * std::cos(t), -k * std::sin(k * t), k * std::cos(k * t);
        return std::pair{dr, dt};
      },
      n_samples);
}

CheckResult immersion_rank_check(const std::function<Vec4(double, double)>& map,
                                 int n_samples) {
  constexpr double h = 1e-6;
  return rank_scan(
      [&map](double r, double t) {
        const Vec4 dr = (map(r + h, t) - map(r - h, t)) / (2.0 * h);
        const Vec4 dt = (map(r, t + h) - map(r, t - h)) / (2.0 * h);
        return std::pair{dr, dt};
      },
      n_samples);
}

double mean_curvature(const AngleField& f, double alpha, double beta, double h,
                      bool richardson) {
  if (!(h > 0.0)) throw InvalidArgument("mean_curvature: step must be positive");
  const double coarse = mean_curvature_once(f, alpha, beta, h);
  if (!richardson) return coarse;
  const double fine = mean_curvature_once(f, alpha, beta, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

double mean_curvature(int k, double alpha, double beta, double h, bool richardson) {
  require_even_k(k, "mean_curvature");
  return mean_curvature(canonical_field(k, 0.0), alpha, beta, h, richardson);
}

CurvatureScan mean_curvature_scan(const AngleField& f, int n_alpha, int n_beta, double h,
                                  double collar, bool richardson) {
  if (n_alpha < 2 || n_beta < 1) throw InvalidArgument("mean_curvature_scan: grid too small");
  if (!(collar > 0.0 && collar < kPi / 2)) {
    throw InvalidArgument("mean_curvature_scan: collar must lie in (0, pi/2)");
  }
  const double top = kPi / 2 - collar;
  std::vector<double> row_sup(n_alpha, 0.0);
  std::vector<int> row_arg(n_alpha, 0);
  parallel_for(static_cast<std::size_t>(n_alpha), [&](std::size_t i) {
    const double a = -top + 2.0 * top * static_cast<double>(i) / (n_alpha - 1);
    for (int j = 0; j < n_beta; ++j) {
      const double v = std::abs(mean_curvature(f, a, kTwoPi * j / n_beta, h, richardson));
      if (v > row_sup[i]) {
        row_sup[i] = v;
        row_arg[i] = j;
      }
    }
  });
  CurvatureScan scan;
  scan.samples = n_alpha * n_beta;
  for (int i = 0; i < n_alpha; ++i) {
    if (i == 0 || row_sup[i] > scan.sup_abs_h) {
      scan.sup_abs_h = row_sup[i];
      scan.alpha_at_sup = -top + 2.0 * top * i / (n_alpha - 1);
      scan.beta_at_sup = kTwoPi * row_arg[i] / n_beta;
    }
  }
  return scan;
}

}  // namespace spherevol
