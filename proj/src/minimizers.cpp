#include "spherevol/minimizers.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "spherevol/errors.hpp"
#include "spherevol/index_bounds.hpp"
#include "spherevol/quadrature.hpp"

namespace spherevol {

AngleField canonical_field(int k, double theta0) {
  if (k < 1) throw InvalidArgument("canonical_field: k must be at least 1");
  const double slope = k - 1.0;
  return AngleField([slope, theta0](double, double b) { return slope * b + theta0; }, k - 1,
                    [slope](double, double) { return AnglePartials{0.0, slope}; });
}

double closed_form_volume(int k) {
  if (k < 1) throw InvalidArgument("closed_form_volume: k must be at least 1");
  const double km1 = k - 1.0;
  auto d = [km1](double a) { return std::sqrt(1.0 + km1 * km1 + 2.0 * km1 * std::sin(a)); };
  return kTwoPi * quad::composite_gl(d, -kPi / 2, kPi / 2, 16, 24);
}

AngleField perturbed_field(int k, double amplitude, std::uint64_t seed) {
  struct Mode {
    int m, n;
    double c, phase_a, phase_b;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0), phase(0.0, kTwoPi);
  std::vector<Mode> modes;
  double total = 0.0;
  for (int m = 1; m <= 3; ++m) {
    for (int n = 0; n <= 3; ++n) {
      Mode md{m, n, coef(rng), phase(rng), phase(rng)};
      total += std::abs(md.c);
      modes.push_back(md);
    }
  }
  const double scale = total > 0.0 ? amplitude / total : 0.0;
  for (auto& md : modes) md.c *= scale;

  auto g = [modes](double a, double b) {
    double s = 0.0;
    for (const auto& md : modes) {
      s += md.c * std::cos(md.m * a + md.phase_a) * std::cos(md.n * b + md.phase_b);
    }
    return s;
  };
  auto dg = [modes](double a, double b) {
    AnglePartials d;
    for (const auto& md : modes) {
      const double ca = std::cos(md.m * a + md.phase_a), sa = std::sin(md.m * a + md.phase_a);
      const double cb = std::cos(md.n * b + md.phase_b), sb = std::sin(md.n * b + md.phase_b);
      d.d_alpha += -md.c * md.m * sa * cb;
      d.d_beta += -md.c * md.n * ca * sb;
    }
    return d;
  };
  return canonical_field(k).plus(g, dg);
}

GridField noisy_canonical_grid(int k, int n_alpha, int n_beta, double amplitude,
                               std::uint64_t seed) {
  GridField g = GridField::sample(canonical_field(k), n_alpha, n_beta);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-amplitude, amplitude);
  for (double& v : g.values()) v += noise(rng);
  return g;
}

DiscreteObjective discrete_volume(const GridField& g, bool with_gradient) {
  const int na = g.n_alpha(), nb = g.n_beta();
  const double da = g.d_alpha(), db = g.d_beta();
  DiscreteObjective out;
  if (with_gradient) out.gradient.assign(g.values().size(), 0.0);
  auto slot = [nb](int i, int j) {
    return static_cast<std::size_t>(i) * nb + static_cast<std::size_t>(j % nb);
  };

  std::vector<double> strips;
  strips.reserve(na + 1);

  // Polar strip next to row `row`, centred at latitude ac, width da / 2.
  auto polar = [&](int row, double ac) {
    const double ca = std::cos(ac), ta = std::tan(ac);
    const double w = ca * 0.5 * da * db;
    std::vector<double> terms(nb);
    for (int j = 0; j < nb; ++j) {
      const double a = ta + (g.at(row, j + 1) - g.at(row, j)) / (db * ca);
      const double s = std::sqrt(1.0 + a * a);
      terms[j] = w * s;
      if (with_gradient) {
        const double ga = w * a / s / (db * ca);
        out.gradient[slot(row, j + 1)] += ga;
        out.gradient[slot(row, j)] -= ga;
      }
    }
    strips.push_back(quad::pairwise_sum(terms));
  };

  polar(0, -kPi / 2 + 0.25 * da);
  for (int s = 0; s + 1 < na; ++s) {
    const double ac = -kPi / 2 + (s + 1) * da;
    const double ca = std::cos(ac), ta = std::tan(ac);
    const double w = 0.5 * ca * da * db;
    std::vector<double> terms(2 * nb);
    for (int j = 0; j < nb; ++j) {
      const double t00 = g.at(s, j), t01 = g.at(s, j + 1);
      const double t10 = g.at(s + 1, j), t11 = g.at(s + 1, j + 1);
      {
        const double a = ta + (t01 - t00) / (db * ca);
        const double b = (t10 - t00) / da;
        const double sq = std::sqrt(1.0 + a * a + b * b);
        terms[2 * j] = w * sq;
        if (with_gradient) {
          const double ga = w * a / sq / (db * ca), gb = w * b / sq / da;
          out.gradient[slot(s, j)] -= ga + gb;
          out.gradient[slot(s, j + 1)] += ga;
          out.gradient[slot(s + 1, j)] += gb;
        }
      }
      {
        const double a = ta + (t11 - t10) / (db * ca);
        const double b = (t11 - t01) / da;
        const double sq = std::sqrt(1.0 + a * a + b * b);
        terms[2 * j + 1] = w * sq;
        if (with_gradient) {
          const double ga = w * a / sq / (db * ca), gb = w * b / sq / da;
          out.gradient[slot(s + 1, j + 1)] += ga + gb;
          out.gradient[slot(s + 1, j)] -= ga;
          out.gradient[slot(s, j + 1)] -= gb;
        }
      }
    }
    strips.push_back(quad::pairwise_sum(terms));
  }
  polar(na - 1, kPi / 2 - 0.25 * da);
  out.value = quad::pairwise_sum(strips);
  return out;
}

double discretization_tolerance(int k, int n_alpha, int n_beta) {
  const GridField g = GridField::sample(canonical_field(k), n_alpha, n_beta);
  const double bound = lower_bound(k);
  // Floor for summation roundoff: at k = 1 the discrete canonical volume is exact.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * bound;
  return std::abs(discrete_volume(g, false).value - bound) + floor;
}

OptimizeResult optimize_field(int k, const GridField& init, const OptimizeOptions& opts) {
  if (k < 1) throw InvalidArgument("optimize_field: k must be at least 1");
  if (init.winding() != k - 1) {
    throw InvalidArgument("optimize_field: initial field has winding " +
                          std::to_string(init.winding()) + ", expected k - 1 = " +
                          std::to_string(k - 1));
  }
  if (opts.max_iters < 0) throw InvalidArgument("optimize_field: negative max_iters");

  OptimizeResult r{init, {}, 0.0, 0, false, lower_bound(k),
                   discretization_tolerance(k, init.n_alpha(), init.n_beta())};
  GridField& x = r.field;
  DiscreteObjective obj = discrete_volume(x);
  r.trace.push_back(obj.value);
  double step = opts.initial_step;
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double t : v) s += t * t;
    return std::sqrt(s);
  };

  for (int it = 0;; ++it) {
    r.grad_norm = norm(obj.gradient);
    if (r.grad_norm <= opts.grad_tol) {
      r.converged = true;
      break;
    }
    if (it >= opts.max_iters) break;
    const double g2 = r.grad_norm * r.grad_norm;
    GridField trial = x;
    DiscreteObjective next;
    bool accepted = false;
    double t = step;
    for (int tries = 0; tries < 60; ++tries, t *= 0.5) {
      for (std::size_t n = 0; n < x.values().size(); ++n) {
        trial.values()[n] = x.values()[n] - t * obj.gradient[n];
      }
      next = discrete_volume(trial, false);
      if (next.value <= obj.value - opts.armijo * t * g2) {
        accepted = true;
        break;
      }
    }
    if (!accepted || obj.value - next.value <= opts.stall_threshold) {
      std::ostringstream msg;
      msg << "optimize_field: line search stalled at iteration " << it << " (objective "
          << obj.value << ", gradient norm " << r.grad_norm << ")";
      throw LineSearchStalled(msg.str());
    }
    x = std::move(trial);
    obj = discrete_volume(x);
    r.trace.push_back(obj.value);
    r.iterations = it + 1;
    step = 2.0 * t;
  }
  return r;
}

}  // namespace spherevol
