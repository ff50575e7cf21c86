#include "spherevol/index_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "spherevol/errors.hpp"
#include "spherevol/quadrature.hpp"

namespace spherevol {

namespace {

// Angle of the chart image of tangent vector w at x, for the stereographic
// chart centred at the given pole.
double chart_angle(const Vec3& x, const Vec3& w, Pole pole) {
  const double s = pole == Pole::North ? 1.0 : -1.0;
  const double den = 1.0 + s * x.z();
  const double u = w.x() / den - s * x.x() * w.z() / (den * den);
  const double v = w.y() / den - s * x.y() * w.z() / (den * den);
  return std::atan2(v, u);
}

double wrap_pi(double d) {
  d = std::remainder(d, kTwoPi);
  return d;
}

}  // namespace

int poincare_index(const AngleField& f, Pole pole, const IndexOptions& opts) {
  if (opts.n_samples < 8) throw InvalidArgument("poincare_index: need at least 8 samples");
  if (!(opts.delta0 > 0.0 && opts.delta0 < kPi / 2)) {
    throw InvalidArgument("poincare_index: delta0 must lie in (0, pi/2)");
  }
  const double alpha = pole == Pole::North ? kPi / 2 - opts.delta0 : -kPi / 2 + opts.delta0;
  const int n = opts.n_samples;
  std::vector<double> angle(n);
  for (int j = 0; j < n; ++j) {
    const SphericalPoint p(alpha, kTwoPi * j / n);
    angle[j] = chart_angle(p.embed(), field_vector(f, p), pole);
  }
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const double d = wrap_pi(angle[(j + 1) % n] - angle[j]);
    if (std::abs(d) >= 0.9 * kPi) {
      std::ostringstream msg;
      msg << "poincare_index: angle jump " << d << " between samples " << j << " and "
          << (j + 1) % n << "; raise n_samples";
      throw UnwrapAmbiguous(msg.str());
    }
    total += d;
  }
  const double turns = total / kTwoPi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.1) {
    throw UnwrapAmbiguous("poincare_index: winding " + std::to_string(turns) +
                          " is not close to an integer");
  }
  return static_cast<int>(rounded);
}

IndexReport index_report(const AngleField& f, const IndexOptions& opts) {
  IndexReport r;
  r.index_north = poincare_index(f, Pole::North, opts);
  r.index_south = poincare_index(f, Pole::South, opts);
  r.sup_index = std::max(r.index_north, r.index_south);
  r.samples_used = 2 * opts.n_samples;
  if (r.index_north + r.index_south != 2) {
    std::ostringstream msg;
    msg << "index_report: indices " << r.index_north << " + " << r.index_south
        << " do not sum to the Euler characteristic 2";
    throw PoincareHopfViolation(msg.str());
  }
  return r;
}

double connection_pullback_integral(const AngleField& f, double alpha, int n_beta) {
  if (n_beta < 1) throw InvalidArgument("connection_pullback_integral: n_beta must be positive");
  const SphericalPoint check(alpha, 0.0);
  (void)check;
  const double ca = std::cos(alpha), ta = std::tan(alpha);
  const double db = kTwoPi / n_beta;
  std::vector<double> terms(n_beta);
  for (int j = 0; j < n_beta; ++j) terms[j] = (ta + f.d_e1(alpha, j * db)) * ca * db;
  return quad::pairwise_sum(terms);
}

double ellipse_length(int k) {
  if (k < 1) throw InvalidArgument("ellipse_length: k must be at least 1");
  const double a2 = static_cast<double>(k - 2) * (k - 2);
  const double b2 = 4.0 * (k - 1);
  auto speed = [a2, b2](double t) {
    const double s = std::sin(t);
    return std::sqrt(a2 + b2 * s * s);
  };
  return 4.0 * quad::composite_gl(speed, 0.0, kPi / 2, 16, 24);
}

double complete_elliptic_e(double m) {
  if (!(m >= 0.0 && m <= 1.0)) throw InvalidArgument("complete_elliptic_e: m outside [0, 1]");
  if (m == 1.0) return 1.0;
  double a = 1.0, b = std::sqrt(1.0 - m), c = std::sqrt(m);
  double sum = 0.5 * c * c;  // 2^{n-1} c_n^2 for n = 0
  double pow2 = 0.5;
  // a and b can settle one ulp apart, leaving c at rounding level forever
  // while its weight 2^n keeps growing; stop before such terms are added.
  for (int n = 1; n < 64; ++n) {
    c = 0.5 * (a - b);
    if (std::abs(c) <= 4.0 * std::numeric_limits<double>::epsilon() * a) break;
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    a = an;
    b = bn;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  const double big_k = kPi / (2.0 * a);
  return big_k * (1.0 - sum);
}

double ellipse_length_agm(int k) {
  if (k < 1) throw InvalidArgument("ellipse_length_agm: k must be at least 1");
  const double major = k, minor = std::abs(k - 2.0);
  const double m = 1.0 - (minor * minor) / (major * major);
  return 4.0 * major * complete_elliptic_e(m);
}

double lower_bound(int k) { return kPi * ellipse_length(k); }

BoundReport verify_bound(const AngleField& f, const QuadratureConfig& cfg,
                         const IndexOptions& index_opts) {
  BoundReport r;
  r.indices = index_report(f, index_opts);
  r.k = r.indices.sup_index;
  const VolumeResult v = volume(f, cfg);
  r.volume = v.value;
  r.error_estimate = v.error_estimate;
  r.bound = lower_bound(r.k);
  r.margin = r.volume - r.bound;
  r.violation = r.margin < -(r.error_estimate + cfg.rel_tol * r.bound);
  r.beyond_stated_hypothesis = r.k <= 2;
  return r;
}

bool ChainAudit::all_equal() const {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo <= tolerance;
}

void ChainAudit::require_monotone() const {
  if (!first_violation) return;
  const int i = *first_violation;
  std::ostringstream msg;
  msg << "audit_chain: link " << i << " -> " << i + 1 << " increases (" << values[i - 1]
      << " < " << values[i] << ", tolerance " << tolerance << ") for k = " << k;
  throw ChainViolation(msg.str(), i);
}

ChainAudit audit_chain(const AngleField& f, int k, const QuadratureConfig& cfg) {
  if (k != 1 + std::abs(f.winding())) {
    throw InvalidArgument("audit_chain: k = " + std::to_string(k) +
                          " is not the larger index 1 + |winding| = " +
                          std::to_string(1 + std::abs(f.winding())));
  }
  ChainAudit r;
  r.k = k;
  r.mirrored = f.winding() < 0;
  r.beyond_stated_hypothesis = k <= 2;
  const AngleField g = r.mirrored ? f.mirrored() : f;
  const double km1 = k - 1.0;

  auto slope = [&g](double a, double b) {
    const AnglePartials d = g.partials(a, b);
    return std::pair{std::tan(a) + d.d_beta / std::cos(a), d.d_alpha};
  };
  auto phi = [km1](double a) {
    const double d = std::sqrt(1.0 + km1 * km1 + 2.0 * km1 * std::sin(a));
    return std::pair{std::cos(a) / d, (km1 + std::sin(a)) / d};
  };
  const std::array<SphereDensity, 4> densities{
      [&](double a, double b) {
        const auto [s, t2] = slope(a, b);
        return std::sqrt(1.0 + s * s + t2 * t2);
      },
      [&](double a, double b) {
        const double s = slope(a, b).first;
        return std::sqrt(1.0 + s * s);
      },
      [&](double a, double b) {
        const auto [c, sn] = phi(a);
        return c + sn * std::abs(slope(a, b).first);
      },
      [&](double a, double b) {
        const auto [c, sn] = phi(a);
        return c + sn * slope(a, b).first;
      },
  };
  for (std::size_t i = 0; i < densities.size(); ++i) {
    const VolumeResult v = sphere_integral(densities[i], cfg);
    r.values[i] = v.value;
    r.errors[i] = v.error_estimate;
  }
  r.values[4] = lower_bound(k);
  r.errors[4] = 0.0;

  double err = 0.0;
  for (double e : r.errors) err = std::max(err, e);
  r.tolerance = 2.0 * err + cfg.rel_tol * r.values[4];
  for (int i = 1; i < 5; ++i) {
    if (r.values[i] > r.values[i - 1] + r.tolerance) {
      r.first_violation = i;
      break;
    }
  }
  return r;
}

}  // namespace spherevol
