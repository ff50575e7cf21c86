#pragma once

#include <functional>
#include <span>
#include <vector>

namespace spherevol::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule (Newton iteration on P_n). Cached per n.
const Rule& gauss_legendre(int n);

// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
double composite_gl(const std::function<double(double)>& f, double a, double b, int panels,
                    int order);

// Sum in pairs so the result depends only on the order of `terms`.
double pairwise_sum(std::span<const double> terms);

// Polynomial (Neville) extrapolation of samples (h_i, v_i) to h = 0.
double extrapolate_to_zero(std::span<const double> h, std::span<const double> v);

}  // namespace spherevol::quad
