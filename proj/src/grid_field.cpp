#include "spherevol/grid_field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "spherevol/errors.hpp"

namespace spherevol {

namespace {

// Catmull-Rom weights for samples at offsets -1, 0, 1, 2 and their derivatives.
std::array<double, 4> cr_weights(double s) {
  const double s2 = s * s, s3 = s2 * s;
  return {0.5 * (-s3 + 2 * s2 - s), 0.5 * (3 * s3 - 5 * s2 + 2), 0.5 * (-3 * s3 + 4 * s2 + s),
          0.5 * (s3 - s2)};
}

std::array<double, 4> cr_slopes(double s) {
  const double s2 = s * s;
  return {0.5 * (-3 * s2 + 4 * s - 1), 0.5 * (9 * s2 - 10 * s), 0.5 * (-9 * s2 + 8 * s + 1),
          0.5 * (3 * s2 - 2 * s)};
}

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

GridField::GridField(int n_alpha, int n_beta, int winding, std::vector<double> theta)
    : n_alpha_(n_alpha), n_beta_(n_beta), winding_(winding), theta_(std::move(theta)) {
  if (n_alpha_ < 2 || n_beta_ < 3) throw InvalidArgument("grid field: lattice too small");
  if (theta_.size() != static_cast<std::size_t>(n_alpha_) * n_beta_) {
    throw InvalidArgument("grid field: value count does not match lattice");
  }
  for (double v : theta_) {
    if (!std::isfinite(v)) throw InvalidArgument("grid field: non-finite angle");
  }
}

GridField::GridField(int n_alpha, int n_beta, int winding)
    : GridField(n_alpha, n_beta, winding,
                std::vector<double>(static_cast<std::size_t>(std::max(n_alpha, 0)) *
                                        std::max(n_beta, 0),
                                    0.0)) {}

GridField GridField::sample(const AngleField& f, int n_alpha, int n_beta) {
  GridField g(n_alpha, n_beta, f.winding());
  for (int i = 0; i < n_alpha; ++i) {
    for (int j = 0; j < n_beta; ++j) g(i, j) = f.theta(g.alpha(i), g.beta(j));
  }
  return g;
}

double GridField::at(int i, int j) const {
  const int wraps = floor_div(j, n_beta_);
  return theta_[index(i, j - wraps * n_beta_)] + kTwoPi * winding_ * wraps;
}

AngleField GridField::to_angle_field() const {
  auto self = std::make_shared<const GridField>(*this);
  auto eval = [self](double a, double b, bool want_partials) {
    const GridField& g = *self;
    const double u = b / g.d_beta();
    const int j = static_cast<int>(std::floor(u));
    const double sb = u - j;
    const auto wb = cr_weights(sb);
    const auto db = cr_slopes(sb);

    double x = (a - g.alpha(0)) / g.d_alpha();
    bool outside = false;
    if (x < 0.0) {
      x = 0.0;
      outside = true;
    } else if (x > g.n_alpha() - 1) {
      x = g.n_alpha() - 1;
      outside = true;
    }
    int i = static_cast<int>(std::floor(x));
    if (i >= g.n_alpha() - 1) i = g.n_alpha() - 2;
    const double sa = x - i;
    const auto wa = cr_weights(sa);
    const auto da = cr_slopes(sa);

    double th = 0.0, ta = 0.0, tb = 0.0;
    for (int p = 0; p < 4; ++p) {
      const int row = std::clamp(i - 1 + p, 0, g.n_alpha() - 1);
      double v = 0.0, vb = 0.0;
      for (int q = 0; q < 4; ++q) {
        const double node = g.at(row, j - 1 + q);
        v += wb[q] * node;
        vb += db[q] * node;
      }
      th += wa[p] * v;
      if (want_partials) {
        ta += da[p] * v;
        tb += wa[p] * vb;
      }
    }
    return std::array<double, 3>{th, outside ? 0.0 : ta / g.d_alpha(), tb / g.d_beta()};
  };
  return AngleField([eval](double a, double b) { return eval(a, b, false)[0]; }, winding_,
                    [eval](double a, double b) {
                      const auto r = eval(a, b, true);
                      return AnglePartials{r[1], r[2]};
                    });
}

std::string GridField::to_json() const {
  nlohmann::json j;
  j["n_alpha"] = n_alpha_;
  j["n_beta"] = n_beta_;
  j["winding"] = winding_;
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < n_alpha_; ++i) {
    std::vector<double> row(theta_.begin() + static_cast<std::ptrdiff_t>(index(i, 0)),
                            theta_.begin() + static_cast<std::ptrdiff_t>(index(i, 0)) + n_beta_);
    rows.push_back(row);
  }
  j["theta"] = rows;
  return j.dump();
}

GridField GridField::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("grid field: malformed JSON: ") + e.what());
  }
  try {
    const auto& rows = j.at("theta");
    const int winding = j.at("winding").get<int>();
    const int n_alpha = static_cast<int>(rows.size());
    if (n_alpha == 0) throw InvalidArgument("grid field: empty theta matrix");
    const int n_beta = static_cast<int>(rows.at(0).size());
    if (j.contains("n_alpha") && j["n_alpha"].get<int>() != n_alpha) {
      throw InvalidArgument("grid field: n_alpha disagrees with theta rows");
    }
    if (j.contains("n_beta") && j["n_beta"].get<int>() != n_beta) {
      throw InvalidArgument("grid field: n_beta disagrees with theta columns");
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n_alpha) * n_beta);
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != n_beta) {
        throw InvalidArgument("grid field: ragged theta matrix");
      }
      for (const auto& v : row) values.push_back(v.get<double>());
    }
    return GridField(n_alpha, n_beta, winding, std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("grid field: ") + e.what());
  }
}

GridField GridField::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("grid field: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace spherevol
