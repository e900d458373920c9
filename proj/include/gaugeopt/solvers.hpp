#pragma once

// Iterative methods for min_y max_i f_i(y) and their per-iteration traces.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "gaugeopt/steps.hpp"

namespace gaugeopt {

namespace schedule {
struct Constant { double eta; };
struct InverseSqrt { double eta; };  // eta / sqrt(k + 10)
struct Inverse { double eta; };      // eta / (k + 10)
/// D / (|f(y_k) g_k| sqrt(T + 1))
struct TheoremSubgrad { double D; int T; };
/// 2 / (mu (k + 2) + M^4 / (mu (k + 1)))
struct TheoremSC { double mu; double M; };
/// D / (M p* sqrt(T + 1))
struct TheoremGenGrad { double D; double M; double p_star; int T; };
struct InverseL { double L; };
}  // namespace schedule

using StepSchedule =
    std::variant<schedule::Constant, schedule::InverseSqrt, schedule::Inverse,
                 schedule::TheoremSubgrad, schedule::TheoremSC, schedule::TheoremGenGrad,
                 schedule::InverseL>;

/// Step size at iteration k; `subgrad_norm` is |f(y_k) g_k|.
double step_size(const StepSchedule& s, int k, double subgrad_norm);

struct TraceRow {
  int iter;
  double time_s;
  double objective;
  double half_sq_objective;
  double best_so_far;
  bool feasible;  // objective <= 1
};

struct Trace {
  std::string method;
  std::vector<TraceRow> rows;
  Vec final_point;  // last iterate (x_k for the accelerated method)
  Vec best_point;
  std::vector<Vec> iterates;    // filled when SolverOptions::record_iterates
  std::vector<double> t_sequence;  // accelerated method only
  bool diverged = false;
  bool infeasible_target = false;
  bool out_of_time = false;
  int stalls = 0;
};

struct SolverOptions {
  bool record_iterates = false;
  double divergence_factor = 1e6;
  double time_budget_s = kInf;  // stop early once exceeded
};

Trace run_subgradient(const FiniteMaxProblem& problem, const Vec& y0, const StepSchedule& schedule,
                      int T, const SolverOptions& opts = {});
Trace run_gen_gradient(const FiniteMaxProblem& problem, const Vec& y0,
                       const StepSchedule& schedule, int T, const SolverOptions& opts = {});
Trace run_armijo(const FiniteMaxProblem& problem, const Vec& y0, double s_bar, double tau,
                 double c, int T, const SolverOptions& opts = {});

/// sqrt(mu/L) when mu > 0, (sqrt(5) - 1)/2 otherwise.
double default_t0(double mu, double L);
/// t0 (t0 L - mu) / (1 - t0)
double accel_gamma0(double t0, double L, double mu);
/// Positive root of t^2 - (mu/L) t - (1 - t_k) t_k^2 = 0.
double next_t(double t_k, double q);

Trace run_accelerated(const FiniteMaxProblem& problem, const Vec& y0, double L, double mu,
                      double t0, int T, const SolverOptions& opts = {});
Trace run_level(const FiniteMaxProblem& problem, const Vec& y0, double f_bar, int T,
                const SolverOptions& opts = {});

struct GapRow {
  int iter;
  double min_gap;            // min_{j <= k} f(y_j) - p*
  double squared_gap_bound;  // (f_best^2 / 2 - p*^2 / 2) / p*
};

std::vector<GapRow> gap_report(const Trace& trace, double p_star);

/// iter,time_s,objective,half_sq_objective,best_so_far,feasible
void write_trace_csv(const Trace& trace, std::ostream& out);
std::string format_double(double v);

}  // namespace gaugeopt
