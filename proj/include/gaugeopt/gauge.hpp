#pragma once

// Gauge evaluation and the structure constants of the half gauge squared.

#include <optional>
#include <utility>

#include "gaugeopt/random.hpp"
#include "gaugeopt/sets.hpp"

namespace gaugeopt {

struct GaugeEval {
  double value = 0.0;
  std::optional<Vec> boundary_point;  // absent when value == 0
  std::optional<Vec> unit_normal;
  Vec half_sq_subgrad;  // element of the subdifferential of gamma^2 / 2
};

/// A set together with a strictly interior center e.
class GaugeOracle {
 public:
  GaugeOracle(StructuredSet set, Vec e);

  const StructuredSet& set() const { return set_; }
  const Vec& center() const { return e_; }
  double R() const { return R_; }
  double D() const { return D_; }
  double lipschitz_M() const { return 1.0 / R_; }
  std::size_t dimension() const { return set_.dimension(); }

  double value(const Vec& y) const;
  GaugeEval eval(const Vec& y) const;

 private:
  StructuredSet set_;
  Vec e_;
  double R_;
  double D_;
};

inline GaugeEval gauge(const GaugeOracle& oracle, const Vec& y) { return oracle.eval(y); }

/// Gauge of B(c, r) about the origin in the inf form: inf{lambda > 0 : z / lambda in B}.
/// Returns +inf when the ray from the origin through z misses the ball.
double ball_gauge(const Vec& c, double r, const Vec& z);

/// Hessian of gamma_B^2 / 2 at y_bar for B = B(y_bar - r zeta, r).
Mat ball_gauge_hessian(const Vec& y_bar, const Vec& zeta, double r);

struct HessianSpectrum {
  double min;
  double mid;  // multiplicity n - 2
  double max;
  double min_lower_bound;
  double max_upper_bound;
};

HessianSpectrum hessian_eigenvalues(const Vec& y_bar, const Vec& zeta, double r);

/// Nonzero eigenvalues of C1 a a^T + C2 (a b^T + b a^T) + C3 b b^T, ascending.
std::pair<double, double> rank2_eigenvalues(const Vec& a, const Vec& b, double C1, double C2,
                                            double C3);

struct LocalStructure {
  double mu_local = 0.0;
  double L_local = kInf;
  double mu_lower_bound = 0.0;
  double L_upper_bound = kInf;
};

/// Local constants at the boundary point of `eval`, measured relative to e.
LocalStructure local_structure(const GaugeEval& eval, const Vec& e, double alpha, double beta);

/// Same, using the oracle's set constants at the boundary point. At value 0
/// the constants are 1/D^2 (zero away from e) and 1/R^2.
LocalStructure local_structure(const GaugeOracle& oracle, const GaugeEval& eval);

struct GaugeStructure {
  double mu = 0.0;
  double L = kInf;
};

/// mu = alpha / (D + alpha D^2), L = (R + beta D^2) / R^3.
GaugeStructure corollary_structure(const StructureConstants& sc, double R, double D);

/// Global (mu, L) of gamma^2 / 2 for the oracle's set.
///
/// Halfspaces give (0, 1/R^2). Euclidean balls and 2-norm ellipsoids use the
/// translated-ball bounds 1/((1+|b|)(2+|b|)) and (2-|b|)/(1-|b|)^2 carried
/// through the linear map; other sets use the corollary bounds.
GaugeStructure global_structure(const GaugeOracle& oracle);

/// Like global_structure, but 2-norm balls use the exact extremes
/// 1/(1+|b|)^2 and 1/(1-|b|)^2 of the Hessian spectrum instead of the
/// looser translated-ball bounds. These are the constants handed to solvers.
GaugeStructure exact_structure(const GaugeOracle& oracle);

/// exact_structure with L of p-norm balls and ellipsoids (p > 2) replaced by
/// a sampled sup of the local bound over the base ball, mapped through A.
/// An estimate, not a bound: mu is still the rigorous one.
GaugeStructure sampled_structure(const GaugeOracle& oracle, std::size_t samples = 2000,
                                 std::uint64_t seed = 0);

GaugeStructure transform_structure(double mu, double L, const Mat& A);
GaugeStructure transform_structure(double mu, double L, double lambda_min, double lambda_max);

struct ConverseCertificate {
  std::optional<Ball> outer;
  std::optional<Ball> inner;
};

ConverseCertificate converse_certificate(const GaugeEval& eval, const Vec& e, double mu, double L);

struct TightnessInstance {
  StructuredSet set;
  Vec y_bar;
  Vec zeta;
  bool origin_interior;  // D^2 < 2R / gamma
};

/// conv({0} U B(c, 1/gamma)) with y_bar = (sqrt(D^2 - R^2), -R), zeta = (0, -1).
TightnessInstance tightness_instance(double gamma, double R, double D);

struct SampledConstants {
  double mu_est;
  double L_est;
};

SampledConstants estimate_constants_by_sampling(const GaugeOracle& oracle, std::size_t samples,
                                                std::uint64_t seed);

}  // namespace gaugeopt
