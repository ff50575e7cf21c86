#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "spherevol/bundle_geometry.hpp"
#include "spherevol/errors.hpp"
#include "spherevol/minimizers.hpp"

using namespace spherevol;

namespace {

Vec3 point(double a, double b) {
  return {std::cos(a) * std::cos(b), std::cos(a) * std::sin(b), std::sin(a)};
}

Vec3 fibre(double a, double b, double psi) {
  const Frame f = frame_from_angles(a, b);
  return std::cos(psi) * f.e1 + std::sin(psi) * f.e2;
}

Vec9 lifted(double a, double b, double psi) { return sasaki_lift(point(a, b), fibre(a, b, psi)); }

// Sasaki metric in the coordinates (alpha, beta, psi), psi the fibre angle
// measured from e1 towards e2.
Eigen::Matrix3d coordinate_metric(double a) {
  Eigen::Matrix3d g;
  g << 1, 0, 0, 0, 1, std::sin(a), 0, std::sin(a), 1;
  return g;
}

// Mean curvature of the graph psi = theta(alpha, beta) computed intrinsically
// from the coordinate metric: Christoffel symbols by differencing the metric,
// second derivatives of theta by differencing theta.
double coordinate_mean_curvature(const std::function<double(double, double)>& theta, double a,
                                 double b) {
  const double h = 1e-4;
  const double ta = (theta(a + h, b) - theta(a - h, b)) / (2 * h);
  const double tb = (theta(a, b + h) - theta(a, b - h)) / (2 * h);
  const double taa = (theta(a + h, b) - 2 * theta(a, b) + theta(a - h, b)) / (h * h);
  const double tbb = (theta(a, b + h) - 2 * theta(a, b) + theta(a, b - h)) / (h * h);
  const double tab = (theta(a + h, b + h) - theta(a + h, b - h) - theta(a - h, b + h) +
                      theta(a - h, b - h)) / (4 * h * h);

  const Eigen::Matrix3d G = coordinate_metric(a);
  // dG/dx^c; only alpha enters.
  std::array<Eigen::Matrix3d, 3> dG;
  dG[0] = (coordinate_metric(a + h) - coordinate_metric(a - h)) / (2 * h);
  dG[1].setZero();
  dG[2].setZero();
  auto gamma_first = [&](int c, int i, int j) {
    return 0.5 * (dG[i](j, c) + dG[j](i, c) - dG[c](i, j));
  };

  const Eigen::Vector3d Xa(1, 0, ta), Xb(0, 1, tb);
  const std::array<Eigen::Vector3d, 2> X{Xa, Xb};
  const Eigen::Vector3d dd[2][2] = {{Eigen::Vector3d(0, 0, taa), Eigen::Vector3d(0, 0, tab)},
                                    {Eigen::Vector3d(0, 0, tab), Eigen::Vector3d(0, 0, tbb)}};
  const Eigen::Vector3d nu_low(-ta, -tb, 1);
  const Eigen::Vector3d nu_up = G.inverse() * nu_low;
  const double len = std::sqrt(nu_low.dot(nu_up));

  Eigen::Matrix2d g, L;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      g(i, j) = X[i].dot(G * X[j]);
      double christoffel = 0.0;
      for (int d = 0; d < 3; ++d) {
        for (int p = 0; p < 3; ++p) {
          for (int q = 0; q < 3; ++q) christoffel += nu_up[d] * gamma_first(d, p, q) * X[i][p] * X[j][q];
        }
      }
      L(i, j) = (nu_low.dot(dd[i][j]) + christoffel) / len;
    }
  }
  return 0.5 * (g.inverse() * L).trace();
}

// Parallel transport along the great circle from N with unit direction d,
// by integrating dV/ds = -(V . c'(s)) c(s) with RK4.
Vec3 transport_ode(const Vec3& d, double s_end, Vec3 v) {
  const Vec3 n(0, 0, 1);
  auto c = [&](double s) { return Vec3(std::cos(s) * n + std::sin(s) * d); };
  auto cdot = [&](double s) { return Vec3(-std::sin(s) * n + std::cos(s) * d); };
  auto rhs = [&](double s, const Vec3& x) { return Vec3(-(x.dot(cdot(s))) * c(s)); };
  const int steps = 2000;
  const double h = s_end / steps;
  for (int i = 0; i < steps; ++i) {
    const double s = i * h;
    const Vec3 k1 = rhs(s, v), k2 = rhs(s + h / 2, v + h / 2 * k1);
    const Vec3 k3 = rhs(s + h / 2, v + h / 2 * k2), k4 = rhs(s + h, v + h * k3);
    v += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return v;
}

}  // namespace

TEST_CASE("bundle points") {
  const BundlePoint q(Vec3(0, 0, 1), Vec3(1, 0, 0));
  CHECK(q.stacked()[3] == 1.0);
  CHECK_THROWS_AS(BundlePoint(Vec3(0, 0, 1), Vec3(0.6, 0, 0.8)), InvalidArgument);
  CHECK_THROWS_AS(BundlePoint(Vec3(0, 0, 1.001), Vec3(1, 0, 0)), InvalidArgument);
}

TEST_CASE("the lift realises the Sasaki metric in fibre coordinates") {
  const double h = 1e-6;
  for (double a : {-1.1, -0.2, 0.5, 1.3}) {
    for (double b : {0.3, 2.9}) {
      for (double psi : {0.0, 1.7}) {
        const Vec9 d[3] = {
            (lifted(a + h, b, psi) - lifted(a - h, b, psi)) / (2 * h),
            (lifted(a, b + h, psi) - lifted(a, b - h, psi)) / (2 * h),
            (lifted(a, b, psi + h) - lifted(a, b, psi - h)) / (2 * h)};
        const Eigen::Matrix3d G = coordinate_metric(a);
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) CHECK(d[i].dot(d[j]) == doctest::Approx(G(i, j)).epsilon(1e-8));
        }
      }
    }
  }
}

TEST_CASE("transport from N matches an ODE solve and the closed-form frame") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(-1.4, 1.4), ub(0.0, kTwoPi);
  for (int n = 0; n < 10; ++n) {
    const double a = ua(rng), b = ub(rng);
    const Vec3 p = point(a, b);
    const Vec3 d(std::cos(b), std::sin(b), 0.0);
    const double s = kPi / 2 - a;
    for (const Vec3& v : {north_u1(), north_u2(), Vec3(0.6, -0.8, 0.0)}) {
      CHECK((transport_from_north(p, v) - transport_ode(d, s, v)).norm() < 1e-10);
    }
    const TransportFrame u = transport_frame(SphericalPoint(a, b));
    const Frame e = frame_at(SphericalPoint(a, b));
    CHECK((u.u1 - (std::cos(b) * e.e1 - std::sin(b) * e.e2)).norm() < 1e-13);
    CHECK((u.u2 - (std::sin(b) * e.e1 + std::cos(b) * e.e2)).norm() < 1e-13);
  }
  const TransportFrame at_x = transport_frame(SphericalPoint(0.0, 0.0));
  CHECK((at_x.u1 - Vec3(0, 1, 0)).norm() < 1e-15);
  CHECK((at_x.u2 - Vec3(0, 0, 1)).norm() < 1e-15);
  CHECK_THROWS_AS(transport_from_north(Vec3(0, 0, -1), north_u1()), InvalidArgument);
}

TEST_CASE("trivialisation turns v_k into (cos kt, sin kt)") {
  for (int k : {2, 3, 4}) {
    for (double r : {0.2, 0.9, 1.5}) {
      for (double t : {0.0, 1.0, 4.0}) {
        const BundlePoint q = trivialize(Vec2(r * std::cos(t), r * std::sin(t)),
                                         Vec2(std::cos(k * t), std::sin(k * t)));
        const double a = kPi / 2 - r;
        CHECK((q.p() - point(a, t)).norm() < 1e-13);
        CHECK((q.w() - fibre(a, t, (k - 1) * t)).norm() < 1e-13);
      }
    }
  }
  const BundlePoint north = trivialize(Vec2(0, 0), Vec2(1, 0));
  CHECK((north.w() - north_u1()).norm() == 0.0);
  CHECK_THROWS_AS(trivialize(Vec2(kPi / 2, 0), Vec2(1, 0)), InvalidArgument);
  CHECK_THROWS_AS(trivialize(Vec2(0.1, 0), Vec2(2, 0)), InvalidArgument);
}

TEST_CASE("Moebius parametrisation") {
  const Vec4 m = moebius_point(0.5, kPi / 2, 2);
  CHECK(m[1] == doctest::Approx(0.5));
  CHECK(m[2] == doctest::Approx(-1.0));
  // j(r, t) = j(-r, t + pi) needs k even.
  CHECK((moebius_point(0.3, 1.0, 4) - moebius_point(-0.3, 1.0 + kPi, 4)).norm() < 1e-14);
  CHECK_THROWS_AS(moebius_point(0.1, 0.0, 3), InvalidArgument);
}

TEST_CASE("ruled structure holds for even k only") {
  for (int k : {2, 4, 6}) {
    const CheckResult r = ruled_decomposition_check(k, 2000, 7);
    CHECK(r.passed);
    CHECK(r.max_error < 1e-12);
  }
  for (int k : {1, 3, 5}) {
    const CheckResult r = ruled_decomposition_check(k, 2000, 7);
    CHECK_FALSE(r.passed);
    CHECK(r.witness.has_value());
    CHECK(r.max_error > 1.0);
  }
}

TEST_CASE("immersion rank") {
  for (int k : {2, 4, 6}) {
    const CheckResult r = immersion_rank_check(k, 2000);
    CHECK(r.passed);
    CHECK(r.max_error == doctest::Approx(1.0));  // smallest singular value seen
  }
  // The flat double cover (r cos t, r sin t, 0, 0) degenerates at r = 0.
  const CheckResult flat =
      immersion_rank_check([](double r, double t) { return Vec4(r * std::cos(t), r * std::sin(t), 0, 0); }, 500);
  CHECK_FALSE(flat.passed);
  REQUIRE(flat.witness.has_value());
  CHECK(std::abs((*flat.witness)[0]) < 1e-12);
  // Central differences reproduce the analytic check.
  CHECK(immersion_rank_check([](double r, double t) { return moebius_point(r, t, 4); }, 500).passed);
}

TEST_CASE("mean curvature agrees with the intrinsic coordinate computation") {
  const auto theta = [](double a, double b) { return b + 0.4 * std::sin(a); };
  const AngleField control(theta, 1, [](double a, double) { return AnglePartials{0.4 * std::cos(a), 1.0}; });
  const auto wavy = [](double a, double b) { return 3 * b + 0.3 * std::cos(2 * a) * std::sin(b); };
  const AngleField other(wavy, 3);
  for (double a : {-1.0, -0.3, 0.4, 1.2}) {
    for (double b : {0.5, 2.0, 5.0}) {
      CHECK(std::abs(mean_curvature(control, a, b, 1e-3)) ==
            doctest::Approx(std::abs(coordinate_mean_curvature(theta, a, b))).epsilon(1e-5));
      CHECK(std::abs(mean_curvature(other, a, b, 1e-3)) ==
            doctest::Approx(std::abs(coordinate_mean_curvature(wavy, a, b))).epsilon(1e-5));
    }
  }
}

TEST_CASE("graphs of v_k are minimal, the control is not") {
  for (int k : {2, 4}) {
    const CurvatureScan s = mean_curvature_scan(canonical_field(k, 0.0), 12, 24, 1e-3);
    CHECK(s.sup_abs_h < 1e-8);
    CHECK(s.samples == 288);
  }
  const AngleField control([](double a, double b) { return b + 0.4 * std::sin(a); }, 1);
  CHECK(mean_curvature_scan(control, 12, 24, 1e-3).sup_abs_h > 5e-2);
  // theta0 only rotates the fibre, an isometry.
  CHECK(std::abs(mean_curvature(canonical_field(4, 1.0), 0.3, 0.2, 1e-3)) < 1e-8);
  CHECK_THROWS_AS(mean_curvature(3, 0.1, 0.1, 1e-3), InvalidArgument);
  CHECK_THROWS_AS(mean_curvature(control, 0.1, 0.1, 0.0), InvalidArgument);
}

TEST_CASE("plain central differences converge at second order") {
  const AngleField control([](double a, double b) { return b + 0.4 * std::sin(a); }, 1,
                           [](double a, double) { return AnglePartials{0.4 * std::cos(a), 1.0}; });
  const double h = 4e-2;
  const double h1 = mean_curvature(control, 0.4, 1.0, h, false);
  const double h2 = mean_curvature(control, 0.4, 1.0, h / 2, false);
  const double h4 = mean_curvature(control, 0.4, 1.0, h / 4, false);
  const double order = std::log2(std::abs(h1 - h2) / std::abs(h2 - h4));
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));
}
