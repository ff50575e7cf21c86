#include "spherevol/volume_quadrature.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "spherevol/errors.hpp"
#include "spherevol/parallel.hpp"
#include "spherevol/quadrature.hpp"

namespace spherevol {

void QuadratureConfig::validate() const {
  if (n_alpha < 1 || n_beta < 1 || gl_order < 1) {
    throw InvalidArgument("quadrature: grid sizes must be positive");
  }
  if (gl_order > 256) throw InvalidArgument("quadrature: gl_order above 256");
  if (!(pole_cutoff > 0.0 && pole_cutoff < kPi / 4)) {
    throw InvalidArgument("quadrature: pole_cutoff must lie in (0, pi/4)");
  }
  if (cutoff_sequence.empty()) throw InvalidArgument("quadrature: empty cutoff_sequence");
  for (std::size_t i = 0; i < cutoff_sequence.size(); ++i) {
    const double e = cutoff_sequence[i];
    if (!(e > 0.0 && e < kPi / 4)) {
      throw InvalidArgument("quadrature: cutoffs must lie in (0, pi/4)");
    }
    if (i > 0 && !(e < cutoff_sequence[i - 1])) {
      throw InvalidArgument("quadrature: cutoff_sequence must be strictly decreasing");
    }
  }
  if (!(rel_tol > 0.0)) throw InvalidArgument("quadrature: rel_tol must be positive");
}

double truncated_sphere_integral(const SphereDensity& density, double eps,
                                 const QuadratureConfig& cfg) {
  const quad::Rule& rule = quad::gauss_legendre(cfg.gl_order);
  const double lo = -kPi / 2 + eps;
  const double width = (kPi - 2.0 * eps) / cfg.n_alpha;
  const double dbeta = kTwoPi / cfg.n_beta;

  std::vector<double> panel(cfg.n_alpha, 0.0);
  parallel_for(panel.size(), [&](std::size_t p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * width;
    const double half = 0.5 * width;
    std::vector<double> ring(cfg.n_beta);
    double s = 0.0;
    for (int i = 0; i < cfg.gl_order; ++i) {
      const double a = mid + half * rule.nodes[i];
      for (int j = 0; j < cfg.n_beta; ++j) ring[j] = density(a, j * dbeta);
      s += rule.weights[i] * std::cos(a) * quad::pairwise_sum(ring) * dbeta;
    }
    panel[p] = s * half;
  });
  return quad::pairwise_sum(panel);
}

VolumeResult sphere_integral(const SphereDensity& density, const QuadratureConfig& cfg) {
  cfg.validate();
  VolumeResult r;
  std::vector<double> hs, vs;
  for (double eps : cfg.cutoff_sequence) {
    const double v = truncated_sphere_integral(density, eps, cfg);
    r.per_cutoff.emplace_back(eps, v);
    hs.push_back(eps);
    vs.push_back(v);
  }
  const std::size_t n = hs.size();
  r.value = quad::extrapolate_to_zero(hs, vs);
  // Compare against the next-lower extrapolation level.
  double lower = vs.back();
  if (n >= 2) {
    lower = quad::extrapolate_to_zero(std::span<const double>(hs).subspan(1),
                                      std::span<const double>(vs).subspan(1));
  }
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(r.value);
  r.error_estimate = std::abs(r.value - lower) + floor;
  r.converged = std::isfinite(r.value) && r.error_estimate <= cfg.rel_tol * std::abs(r.value);
  return r;
}

VolumeResult volume(const AngleField& f, const QuadratureConfig& cfg) {
  VolumeResult r = sphere_integral(
      [&f](double a, double b) { return volume_integrand(f, a, b); }, cfg);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "volume: cutoff extrapolation did not converge (value " << r.value
        << ", error estimate " << r.error_estimate << ", rel_tol " << cfg.rel_tol << ")";
    throw NotConverged(msg.str(), r.value, r.error_estimate);
  }
  return r;
}

double volume_lower_floor() { return 4.0 * kPi; }

}  // namespace spherevol
