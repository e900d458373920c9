#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

#include <Eigen/Dense>

namespace gaugeopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ||v||_p for p in (1, inf).
inline double pnorm(const Vec& v, double p) {
  if (p == 2.0) return v.norm();
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), p);
  return std::pow(s, 1.0 / p);
}

// (p-1) n^{1/2 - 1/p}: curvature constant of the unit p-norm ball in R^n.
inline double pnorm_ball_constant(double p, std::size_t n) {
  return (p - 1.0) * std::pow(static_cast<double>(n), 0.5 - 1.0 / p);
}

}  // namespace gaugeopt
