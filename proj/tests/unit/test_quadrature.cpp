#include <doctest.h>

#include <cmath>
#include <vector>

#include "spherevol/errors.hpp"
#include "spherevol/quadrature.hpp"
#include "spherevol/sphere_core.hpp"

using namespace spherevol;

TEST_CASE("Gauss-Legendre nodes and weights") {
  const quad::Rule& r5 = quad::gauss_legendre(5);
  REQUIRE(r5.nodes.size() == 5);
  // Tabulated 5-point rule.
  CHECK(std::abs(std::abs(r5.nodes.front()) - 0.9061798459386640) < 1e-15);
  CHECK(std::abs(r5.nodes[2]) < 1e-15);
  CHECK(r5.weights[2] == doctest::Approx(128.0 / 225.0).epsilon(1e-15));

  for (int n : {1, 2, 7, 24, 64, 200}) {
    const quad::Rule& r = quad::gauss_legendre(n);
    double sum = 0.0;
    for (double w : r.weights) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-13));
    for (int i = 0; i < n; ++i) {
      CHECK(r.nodes[i] == doctest::Approx(-r.nodes[n - 1 - i]).epsilon(1e-13));
    }
  }
}

TEST_CASE("n-point rule is exact through degree 2n - 1") {
  for (int n : {2, 3, 6, 10}) {
    const quad::Rule& r = quad::gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double q = 0.0;
      for (int i = 0; i < n; ++i) q += r.weights[i] * std::pow(r.nodes[i], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(q == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("invalid rule sizes are rejected") {
  CHECK_THROWS_AS(quad::gauss_legendre(0), InvalidArgument);
  CHECK_THROWS_AS(quad::gauss_legendre(257), InvalidArgument);
}

TEST_CASE("composite rule on smooth integrands") {
  const double e = quad::composite_gl([](double x) { return std::exp(x); }, 0.0, 1.0, 4, 8);
  CHECK(e == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
  const double s = quad::composite_gl([](double x) { return std::sin(x) * std::sin(x); }, 0.0,
                                      kPi, 3, 12);
  CHECK(s == doctest::Approx(kPi / 2).epsilon(1e-15));
}

TEST_CASE("pairwise sum") {
  std::vector<double> v(1000, 0.1);
  CHECK(quad::pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(quad::pairwise_sum(std::span<const double>{}) == 0.0);
}

TEST_CASE("Neville extrapolation removes polynomial error terms") {
  const std::vector<double> h{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> v;
  for (double x : h) v.push_back(3.0 + 2.0 * x - 5.0 * x * x + 7.0 * x * x * x);
  CHECK(quad::extrapolate_to_zero(h, v) == doctest::Approx(3.0).epsilon(1e-13));
  // Two points: linear extrapolation.
  const std::vector<double> h2{0.2, 0.1}, v2{1.2, 1.1};
  CHECK(quad::extrapolate_to_zero(h2, v2) == doctest::Approx(1.0));
}
