#include "gaugeopt/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace gaugeopt {

double step_size(const StepSchedule& s, int k, double subgrad_norm) {
  const double kk = static_cast<double>(k);
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, schedule::Constant>) {
          return v.eta;
        } else if constexpr (std::is_same_v<T, schedule::InverseSqrt>) {
          return v.eta / std::sqrt(kk + 10.0);
        } else if constexpr (std::is_same_v<T, schedule::Inverse>) {
          return v.eta / (kk + 10.0);
        } else if constexpr (std::is_same_v<T, schedule::TheoremSubgrad>) {
          const double root = std::sqrt(static_cast<double>(v.T) + 1.0);
          return subgrad_norm > 0.0 ? v.D / (subgrad_norm * root) : v.D / root;
        } else if constexpr (std::is_same_v<T, schedule::TheoremSC>) {
          const double M2 = v.M * v.M;
          return 2.0 / (v.mu * (kk + 2.0) + M2 * M2 / (v.mu * (kk + 1.0)));
        } else if constexpr (std::is_same_v<T, schedule::TheoremGenGrad>) {
          return v.D / (v.M * v.p_star * std::sqrt(static_cast<double>(v.T) + 1.0));
        } else {
          return 1.0 / v.L;
        }
      },
      s);
}

namespace {

using Clock = std::chrono::steady_clock;

// Shared bookkeeping for every method: rows, best point, divergence guard.
class Recorder {
 public:
  Recorder(std::string method, const SolverOptions& opts) : opts_(opts), start_(Clock::now()) {
    trace_.method = std::move(method);
  }

  // Returns false when the run must stop.
  bool record(int k, const Vec& point, double f) {
    if (trace_.rows.empty()) initial_ = f;
    const double best = trace_.rows.empty() ? f : std::min(trace_.rows.back().best_so_far, f);
    if (trace_.rows.empty() || f < trace_.rows.back().best_so_far) trace_.best_point = point;
    const double t = std::chrono::duration<double>(Clock::now() - start_).count();
    trace_.rows.push_back({k, t, f, 0.5 * f * f, best, f <= 1.0});
    trace_.final_point = point;
    if (opts_.record_iterates) trace_.iterates.push_back(point);
    if (!std::isfinite(f) || f > opts_.divergence_factor * std::max(initial_, 1e-300)) {
      trace_.diverged = true;
      return false;
    }
    if (t > opts_.time_budget_s) {
      trace_.out_of_time = true;
      return false;
    }
    return true;
  }

  Trace& trace() { return trace_; }

 private:
  SolverOptions opts_;
  Clock::time_point start_;
  double initial_ = 0.0;
  Trace trace_;
};

void require_iters(int T) {
  if (T < 0) throw Error(ErrorCode::invalid_argument, "iteration count must be nonnegative");
}

}  // namespace

Trace run_subgradient(const FiniteMaxProblem& problem, const Vec& y0, const StepSchedule& schedule,
                      int T, const SolverOptions& opts) {
  require_iters(T);
  Recorder rec("subgrad", opts);
  Vec y = y0;
  for (int k = 0;; ++k) {
    const Linearization lin = linearize(problem, y);
    if (!rec.record(k, y, lin.max_f()) || k == T) break;
    const Vec& a = lin.a[lin.argmax];
    y = y - step_size(schedule, k, a.norm()) * a;
  }
  return std::move(rec.trace());
}

Trace run_gen_gradient(const FiniteMaxProblem& problem, const Vec& y0,
                       const StepSchedule& schedule, int T, const SolverOptions& opts) {
  require_iters(T);
  Recorder rec("gengrad", opts);
  Vec y = y0;
  for (int k = 0;; ++k) {
    const Linearization lin = linearize(problem, y);
    if (!rec.record(k, y, lin.max_f()) || k == T) break;
    y = gen_grad_step(lin, step_size(schedule, k, lin.a[lin.argmax].norm())).next_point;
  }
  return std::move(rec.trace());
}

Trace run_armijo(const FiniteMaxProblem& problem, const Vec& y0, double s_bar, double tau,
                 double c, int T, const SolverOptions& opts) {
  require_iters(T);
  Recorder rec("armijo", opts);
  Vec y = y0;
  for (int k = 0;; ++k) {
    if (!rec.record(k, y, problem.value(y)) || k == T) break;
    StepResult r = armijo_gen_grad(problem, y, s_bar, tau, c);
    if (r.stalled) ++rec.trace().stalls;
    y = std::move(r.next_point);
  }
  return std::move(rec.trace());
}

double default_t0(double mu, double L) {
  if (mu > 0.0) return std::sqrt(mu / L);
  return 0.5 * (std::sqrt(5.0) - 1.0);
}

double accel_gamma0(double t0, double L, double mu) {
  if (mu > 0.0 && t0 == std::sqrt(mu / L)) return mu;  // exact value at the fixed point
  return t0 * (t0 * L - mu) / (1.0 - t0);
}

double next_t(double t_k, double q) {
  const double c = (1.0 - t_k) * t_k * t_k;
  return 0.5 * (q + std::sqrt(q * q + 4.0 * c));
}

Trace run_accelerated(const FiniteMaxProblem& problem, const Vec& y0, double L, double mu,
                      double t0, int T, const SolverOptions& opts) {
  require_iters(T);
  if (!(L > 0.0) || !(mu >= 0.0) || mu > L)
    throw Error(ErrorCode::invalid_argument, "need L > 0 and 0 <= mu <= L");
  if (!(t0 > 0.0) || t0 > 1.0) throw Error(ErrorCode::invalid_argument, "t0 must lie in (0, 1]");
  Recorder rec("accel", opts);
  const double q = mu / L;
  Vec x = y0, y = y0;
  double t = t0;
  rec.trace().t_sequence.push_back(t);
  for (int k = 0;; ++k) {
    if (!rec.record(k, x, problem.value(x)) || k == T) break;
    const Vec x_next = gen_grad_step(problem, y, 1.0 / L).next_point;
    const double t_next = std::clamp(next_t(t, q), 1e-12, 1.0);
    const double beta = t * (1.0 - t) / (t * t + t_next);
    y = x_next + beta * (x_next - x);
    x = x_next;
    t = t_next;
    rec.trace().t_sequence.push_back(t);
  }
  return std::move(rec.trace());
}

Trace run_level(const FiniteMaxProblem& problem, const Vec& y0, double f_bar, int T,
                const SolverOptions& opts) {
  require_iters(T);
  if (!(f_bar > 0.0)) throw Error(ErrorCode::invalid_argument, "target level must be positive");
  Recorder rec("level", opts);
  Vec y = y0;
  for (int k = 0;; ++k) {
    const Linearization lin = linearize(problem, y);
    if (!rec.record(k, y, lin.max_f()) || k == T) break;
    try {
      y = level_proj_step(lin, f_bar).next_point;
    } catch (const Error& ex) {
      if (ex.code() != ErrorCode::empty_level_set) throw;
      rec.trace().infeasible_target = true;
      break;
    }
  }
  return std::move(rec.trace());
}

std::vector<GapRow> gap_report(const Trace& trace, double p_star) {
  if (!(p_star > 0.0)) throw Error(ErrorCode::invalid_argument, "p* must be positive");
  std::vector<GapRow> out;
  out.reserve(trace.rows.size());
  double best = kInf;
  for (const TraceRow& r : trace.rows) {
    best = std::min(best, r.objective);
    out.push_back({r.iter, best - p_star, (0.5 * best * best - 0.5 * p_star * p_star) / p_star});
  }
  return out;
}

}  // namespace gaugeopt
