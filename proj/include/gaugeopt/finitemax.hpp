#pragma once

// Finite-maximum objectives max_i f_i(y) built from gauges and radial duals.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gaugeopt/gauge.hpp"

namespace gaugeopt {

struct ComponentValue {
  double value;
  Vec half_sq_subgrad;  // f(y) g with g a subgradient of f
};

/// One nonnegative convex component with the metadata used by the solvers:
/// M bounds the Lipschitz constant of f, mu and L are the strong convexity
/// and smoothness of f^2 / 2.
struct ComponentFunction {
  std::string name;
  std::function<ComponentValue(const Vec&)> evaluate;
  double M = kInf;
  double mu = 0.0;
  double L = kInf;
};

struct MaxEvaluation {
  std::vector<double> values;
  std::vector<Vec> half_sq_subgrads;
  double value = 0.0;
  std::size_t argmax = 0;  // lowest index attaining the max
};

class FiniteMaxProblem {
 public:
  FiniteMaxProblem(std::size_t dimension, std::vector<ComponentFunction> components,
                   std::optional<double> p_star_hint = std::nullopt);

  std::size_t dimension() const { return n_; }
  std::size_t size() const { return components_.size(); }
  const ComponentFunction& component(std::size_t i) const { return components_.at(i); }

  double M() const { return M_; }
  double mu() const { return mu_; }
  double L() const { return L_; }
  const std::optional<double>& p_star_hint() const { return p_star_; }
  void set_p_star_hint(std::optional<double> p) { p_star_ = p; }

  /// Overrides the aggregated metadata (CLI tuning).
  void set_constants(double M, double mu, double L);

  double value(const Vec& y) const;
  MaxEvaluation evaluate(const Vec& y) const;

 private:
  std::size_t n_;
  std::vector<ComponentFunction> components_;
  double M_ = 0.0;
  double mu_ = kInf;
  double L_ = 0.0;
  std::optional<double> p_star_;
};

ComponentFunction gauge_component(const GaugeOracle& oracle, std::string name = "gauge");
/// Same, with caller-supplied (mu, L) metadata.
ComponentFunction gauge_component(const GaugeOracle& oracle, const GaugeStructure& gs,
                                  std::string name);

enum class ConstantPolicy { rigorous, sampled };

/// max_i gamma_{S_i, e_i}(y); membership in every S_i iff the value is <= 1.
/// `sampled` swaps in sampled_structure for the smoothness metadata.
FiniteMaxProblem feasibility_problem(const std::vector<GaugeOracle>& oracles,
                                     ConstantPolicy policy = ConstantPolicy::rigorous);

/// f(x) = 1 - x^T Q x / 2 - c^T x with Q symmetric positive semidefinite.
struct QuadraticObjective {
  Mat Q;
  Vec c;

  QuadraticObjective(Mat Q, Vec c);
  double operator()(const Vec& x) const;
};

struct RadialValue {
  double value;
  Vec gradient_of_half_sq;
};

/// f^Gamma(y) = (w + sqrt(w^2 + 2 y^T Q y)) / 2 with w = c^T y + 1.
RadialValue radial_quadratic(const QuadraticObjective& q, const Vec& y);

struct RadialOptions {
  double sample_radius = 1.0;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  std::optional<double> M, mu, L;  // overrides for the f^Gamma metadata
};

/// Two components {f^Gamma, gamma_{S,0}}; the constraint must be centered at 0.
FiniteMaxProblem radial_dual_problem(const QuadraticObjective& q, const GaugeOracle& constraint,
                                     const RadialOptions& opts = {});

struct PrimalPoint {
  Vec x;
  double objective;
};

/// x = y / F(y), objective 1 / F(y).
PrimalPoint recover_primal(const FiniteMaxProblem& problem, const Vec& y);

/// CGLS on min ||A x - b||, exactly `iterations` steps from x = 0.
Vec recenter(const Mat& A, const Vec& b, int iterations = 30);

/// Residual norms ||A x_k - b|| for k = 0..iterations, for diagnostics.
std::vector<double> recenter_residuals(const Mat& A, const Vec& b, int iterations = 30);

/// Moves e toward a deep point of {||A x - b||_p <= tau} until it is
/// strictly interior, halving the step at most 50 times.
Vec repair_center(const StructuredSet& set, const Vec& e);

}  // namespace gaugeopt
