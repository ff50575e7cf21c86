#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "spherevol/errors.hpp"
#include "spherevol/index_bounds.hpp"
#include "spherevol/minimizers.hpp"

using namespace spherevol;

TEST_CASE("closed form volume equals pi times the ellipse perimeter") {
  // Two unrelated integrals: over latitude of sqrt(1 + (k-1)^2 + 2(k-1) sin a)
  // and the perimeter of the ellipse with semi-axes k and |k - 2|.
  for (int k = 1; k <= 10; ++k) {
    CHECK(closed_form_volume(k) == doctest::Approx(lower_bound(k)).epsilon(1e-12));
  }
}

TEST_CASE("canonical field") {
  const AngleField f = canonical_field(4, 0.25);
  CHECK(f.winding() == 3);
  CHECK(f.theta(0.3, 1.0) == doctest::Approx(3.0 + 0.25));
  const AnglePartials d = f.partials(0.3, 1.0);
  CHECK(d.d_alpha == 0.0);
  CHECK(d.d_beta == 3.0);
  CHECK(canonical_field(1).theta(0.1, 0.2) == doctest::Approx(kPi / 2));
  CHECK_THROWS_AS(canonical_field(0), InvalidArgument);
}

TEST_CASE("perturbations are bounded, periodic and deterministic") {
  const AngleField base = canonical_field(3);
  const AngleField f = perturbed_field(3, 0.25, 42);
  const AngleField g = perturbed_field(3, 0.25, 42);
  double sup = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double a = -1.5 + 3.0 * i / 39;
    for (int j = 0; j < 40; ++j) {
      const double b = kTwoPi * j / 40;
      sup = std::max(sup, std::abs(f.theta(a, b) - base.theta(a, b)));
      CHECK(f.theta(a, b) == g.theta(a, b));
      CHECK(f.theta(a, b + kTwoPi) == doctest::Approx(f.theta(a, b) + 2 * kTwoPi));
    }
  }
  CHECK(sup <= 0.25 + 1e-12);
  CHECK(sup > 0.01);
  CHECK(perturbed_field(3, 0.25, 43).theta(0.2, 0.2) != f.theta(0.2, 0.2));
}

TEST_CASE("discrete gradient agrees with differences of the discrete volume") {
  GridField g = noisy_canonical_grid(3, 6, 12, 0.3, 9);
  const DiscreteObjective obj = discrete_volume(g);
  REQUIRE(obj.gradient.size() == g.values().size());
  const double h = 1e-6;
  for (std::size_t n = 0; n < g.values().size(); n += 7) {
    const double keep = g.values()[n];
    g.values()[n] = keep + h;
    const double up = discrete_volume(g, false).value;
    g.values()[n] = keep - h;
    const double down = discrete_volume(g, false).value;
    g.values()[n] = keep;
    CHECK(obj.gradient[n] == doctest::Approx((up - down) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("discrete volume of the canonical grid and the discrete bound") {
  for (int k : {1, 2, 3}) {
    const GridField c = GridField::sample(canonical_field(k), 16, 32);
    const double vc = discrete_volume(c, false).value;
    CHECK(std::abs(vc - lower_bound(k)) <= discretization_tolerance(k, 16, 32));
    CHECK(discretization_tolerance(k, 16, 32) < 5e-3 * lower_bound(k));
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const GridField noisy = noisy_canonical_grid(k, 16, 32, 0.3, seed);
      CHECK(discrete_volume(noisy, false).value >= vc - 1e-12);
    }
  }
}

TEST_CASE("v1 is a critical point of the discrete volume") {
  const GridField c = GridField::sample(canonical_field(1), 16, 32);
  const OptimizeResult r = optimize_field(1, c);
  CHECK(r.converged);
  CHECK(r.grad_norm < 1e-6);
  CHECK(r.iterations == 0);
  CHECK(r.trace.front() == doctest::Approx(2 * kPi * kPi).epsilon(1e-12));
}

TEST_CASE("descent from a noisy start") {
  OptimizeOptions opts;
  opts.grad_tol = 1e-5;
  const OptimizeResult r = optimize_field(3, noisy_canonical_grid(3, 12, 24, 0.2, 5), opts);
  CHECK(r.converged);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1]);
  CHECK(r.trace.back() >= r.bound - r.tol_disc);
  CHECK(std::abs(r.trace.back() - r.bound) < 5e-3 * r.bound);
  CHECK(r.field.winding() == 2);
}

TEST_CASE("optimizer errors") {
  const GridField g = noisy_canonical_grid(3, 8, 16, 0.2, 1);
  CHECK_THROWS_AS(optimize_field(2, g), InvalidArgument);
  OptimizeOptions impossible;
  impossible.stall_threshold = 1e3;
  CHECK_THROWS_AS(optimize_field(3, g, impossible), LineSearchStalled);
}
