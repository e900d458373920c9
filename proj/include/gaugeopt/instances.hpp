#pragma once

// Synthetic benchmark instances: two-ellipsoid feasibility problems and
// quadratic objectives over one p-norm ellipsoid.

#include <array>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "gaugeopt/finitemax.hpp"

namespace gaugeopt {

/// Find x with |A_i x - b_i|_{p_i} <= tau_i for i = 1, 2 (A_i square).
struct FeasibilityInstance {
  std::size_t n = 0;
  std::array<double, 2> p{};
  std::uint64_t seed = 0;
  Vec x_true;
  std::array<Mat, 2> A;
  std::array<Vec, 2> b;
  std::array<double, 2> tau{};
  std::array<Vec, 2> e;  // strictly interior gauge centers

  StructuredSet set(std::size_t i) const;
  std::vector<GaugeOracle> oracles() const;
  FiniteMaxProblem problem(ConstantPolicy policy = ConstantPolicy::rigorous) const;
};

/// Stream indices below `seed` used by the generators, one per array.
namespace streams {
inline constexpr std::uint64_t x_true = 0, A1 = 1, A2 = 2, eps1 = 3, eps2 = 4, tau1 = 5, tau2 = 6;
inline constexpr std::uint64_t Q = 10, c = 11, A = 12, x_feas = 13, eps = 14;
}  // namespace streams

/// Empirical `level` quantile of |eps|_p over `samples` generalized normal draws.
double noise_norm_quantile(std::size_t n, double p, std::size_t samples, double level, Rng& rng);

FeasibilityInstance generate_feasibility(std::size_t n, double p1, double p2, std::uint64_t seed);

/// Maximize 1 - x^T Q x / 2 - c^T x subject to |A x - b|_p <= 1.
struct TrustRegionInstance {
  std::size_t n = 0, m = 0;
  double p = 2.0;
  std::uint64_t seed = 0;
  Mat Q;
  Vec c;
  Mat A;
  Vec b;
  Vec x_feas;
  Vec e;  // interior point; the solvers work in x' = x - e

  /// Objective in shifted coordinates, normalized to equal 1 at x' = 0.
  QuadraticObjective shifted_objective() const;
  StructuredSet shifted_constraint() const;
  /// Original objective at the original point e + x'.
  double original_objective_of_shifted(const Vec& x_shifted) const;
  double original_objective(const Vec& x) const;
};

TrustRegionInstance generate_trust_region(std::size_t n, std::size_t m, double p, std::uint64_t seed);

nlohmann::json to_json(const FeasibilityInstance& inst);
nlohmann::json to_json(const TrustRegionInstance& inst);

}  // namespace gaugeopt
