#pragma once

// Subgradient, generalized gradient (prox-linear) and level projection steps.

#include <vector>

#include "gaugeopt/finitemax.hpp"

namespace gaugeopt {

/// Component linearizations at y: h_i = f_i(y)^2 / 2, a_i = f_i(y) g_i.
struct Linearization {
  Vec y;
  std::vector<double> f;
  std::vector<double> h;
  std::vector<Vec> a;
  std::size_t argmax = 0;

  std::size_t size() const { return h.size(); }
  double max_f() const { return f[argmax]; }
  /// max_i {h_i + a_i^T (z - y)}
  double model(const Vec& z) const;
};

Linearization linearize(const FiniteMaxProblem& problem, const Vec& y);

struct StepResult {
  Vec next_point;
  std::vector<std::size_t> active_components;
  std::vector<double> multipliers;
  double model_decrease = 0.0;
  double step_size = 0.0;
  bool stalled = false;
};

StepResult subgrad_step(const FiniteMaxProblem& problem, const Vec& y, double alpha);

/// argmin_z max_i {h_i + a_i^T (z - y)} + |z - y|^2 / (2 alpha).
StepResult gen_grad_step(const Linearization& lin, double alpha);
StepResult gen_grad_step(const FiniteMaxProblem& problem, const Vec& y, double alpha);

/// Projection of y onto {z : h_i + a_i^T (z - y) <= f_bar^2 / 2 for all i}.
StepResult level_proj_step(const Linearization& lin, double f_bar);
StepResult level_proj_step(const FiniteMaxProblem& problem, const Vec& y, double f_bar);

/// Largest s = tau^i s_bar, i = 0..60, whose generalized gradient point
/// satisfies f^2(z)/2 <= f^2(y)/2 - c |z - y|^2. Stalls at y otherwise.
StepResult armijo_gen_grad(const FiniteMaxProblem& problem, const Vec& y, double s_bar, double tau,
                           double c);

/// Most components handled by support enumeration.
inline constexpr std::size_t kMaxEnumeratedComponents = 8;

}  // namespace gaugeopt
