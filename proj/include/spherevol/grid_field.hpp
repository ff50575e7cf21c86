#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spherevol/sphere_core.hpp"

namespace spherevol {

/// Angle field sampled on an (alpha, beta) lattice.
///
/// Row i sits at alpha_i = -pi/2 + (i + 1/2) pi / n_alpha, column j at
/// beta_j = 2 pi j / n_beta. One period is stored; column n_beta is
/// column 0 shifted by 2 pi * winding.
class GridField {
 public:
  GridField(int n_alpha, int n_beta, int winding, std::vector<double> theta);
  GridField(int n_alpha, int n_beta, int winding);

  // Samples f at the lattice nodes.
  static GridField sample(const AngleField& f, int n_alpha, int n_beta);

  int n_alpha() const { return n_alpha_; }
  int n_beta() const { return n_beta_; }
  int winding() const { return winding_; }
  double d_alpha() const { return kPi / n_alpha_; }
  double d_beta() const { return kTwoPi / n_beta_; }
  double alpha(int i) const { return -kPi / 2 + (i + 0.5) * d_alpha(); }
  double beta(int j) const { return j * d_beta(); }

  // Row i, any integer column (periodic with the winding jump).
  double at(int i, int j) const;
  double& operator()(int i, int j) { return theta_[index(i, j)]; }
  double operator()(int i, int j) const { return theta_[index(i, j)]; }

  const std::vector<double>& values() const { return theta_; }
  std::vector<double>& values() { return theta_; }

  // Distance from the outermost rows to the poles.
  double pole_clearance() const { return 0.5 * d_alpha(); }

  // Smooth interpolant (cubic in each direction, constant in alpha beyond
  // the outer rows) with analytic partials.
  AngleField to_angle_field() const;

  // {"n_alpha":..,"n_beta":..,"winding":..,"theta":[[row 0], ...]}
  std::string to_json() const;
  static GridField from_json(const std::string& text);
  static GridField load(const std::string& path);

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * n_beta_ + static_cast<std::size_t>(j);
  }

  int n_alpha_;
  int n_beta_;
  int winding_;
  std::vector<double> theta_;
};

}  // namespace spherevol
