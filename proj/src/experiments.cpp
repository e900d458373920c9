#include "gaugeopt/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

namespace gaugeopt {

namespace {

std::optional<int> first_feasible(const Trace& t) {
  for (const TraceRow& r : t.rows)
    if (r.feasible) return r.iter;
  return std::nullopt;
}

nlohmann::json base_summary(const ExperimentConfig& c, const Trace& t) {
  nlohmann::json j;
  j["subcommand"] = c.subcommand;
  j["method"] = t.method;
  j["n"] = c.n;
  j["seed"] = c.seed;
  j["iterations"] = t.rows.empty() ? 0 : t.rows.back().iter;
  j["final_objective"] = t.rows.empty() ? kInf : t.rows.back().objective;
  j["best_objective"] = t.rows.empty() ? kInf : t.rows.back().best_so_far;
  j["elapsed_s"] = t.rows.empty() ? 0.0 : t.rows.back().time_s;
  j["diverged"] = t.diverged;
  j["infeasible_target"] = t.infeasible_target;
  j["out_of_time"] = t.out_of_time;
  j["armijo_stalls"] = t.stalls;
  return j;
}

int exit_code_of(const Trace& t) {
  if (t.diverged) return 2;
  if (t.infeasible_target) return 3;
  return 0;
}

}  // namespace

Trace run_method(const FiniteMaxProblem& problem, const Vec& y0, const ExperimentConfig& c,
                 double D_default, nlohmann::json* used) {
  SolverOptions opts;
  opts.time_budget_s = c.time_budget_s;
  const double M = c.M.value_or(problem.M());
  const double D = c.D.value_or(D_default);
  const double p_star = c.p_star.value_or(problem.p_star_hint().value_or(1.0));
  const double L = c.L.value_or(problem.L());
  const double mu = c.mu.value_or(problem.mu());
  nlohmann::json params = {{"M", M}, {"D", D}, {"p_star", p_star}, {"L", L}, {"mu", mu}};

  auto pick_schedule = [&](const std::string& fallback) -> StepSchedule {
    const std::string s = c.schedule.empty() ? fallback : c.schedule;
    params["schedule"] = s;
    if (s == "constant") return schedule::Constant{c.eta};
    if (s == "invsqrt") return schedule::InverseSqrt{c.eta};
    if (s == "inverse") return schedule::Inverse{c.eta};
    if (s == "theorem") return schedule::TheoremSubgrad{D, c.iters};
    if (s == "theorem-sc") return schedule::TheoremSC{mu, M};
    if (s == "theorem-gengrad") return schedule::TheoremGenGrad{D, M, p_star, c.iters};
    if (s == "inverse-L") return schedule::InverseL{L};
    throw Error(ErrorCode::invalid_argument, "unknown schedule '" + s + "'");
  };

  Trace t;
  if (c.method == "subgrad") {
    t = run_subgradient(problem, y0, pick_schedule("theorem"), c.iters, opts);
  } else if (c.method == "gengrad") {
    t = run_gen_gradient(problem, y0, pick_schedule(std::isfinite(L) ? "inverse-L" : "theorem-gengrad"),
                         c.iters, opts);
  } else if (c.method == "accel") {
    if (!std::isfinite(L)) throw Error(ErrorCode::invalid_argument, "accelerated method needs finite L");
    const double t0 = c.t0.value_or(default_t0(mu, L));
    params["t0"] = t0;
    t = run_accelerated(problem, y0, L, mu, t0, c.iters, opts);
  } else if (c.method == "level") {
    const double f_bar = c.f_bar.value_or(p_star);
    params["f_bar"] = f_bar;
    t = run_level(problem, y0, f_bar, c.iters, opts);
  } else if (c.method == "armijo") {
    params["armijo"] = {c.armijo_s, c.armijo_tau, c.armijo_c};
    t = run_armijo(problem, y0, c.armijo_s, c.armijo_tau, c.armijo_c, c.iters, opts);
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown method '" + c.method + "'");
  }
  if (used) *used = std::move(params);
  return t;
}

ExperimentOutcome run_feasibility_experiment(const ExperimentConfig& c) {
  const FeasibilityInstance inst = generate_feasibility(c.n, c.p1, c.p2, c.seed);
  const std::vector<GaugeOracle> oracles = inst.oracles();
  const FiniteMaxProblem problem = feasibility_problem(
      oracles, c.constants == "sampled" ? ConstantPolicy::sampled : ConstantPolicy::rigorous);
  const Vec y0 = inst.e[0];
  const double R = std::min(oracles[0].R(), oracles[1].R());
  nlohmann::json params;
  ExperimentOutcome out;
  out.trace = run_method(problem, y0, c, y0.norm() + 2.0 * R, &params);
  out.summary = base_summary(c, out.trace);
  out.summary["p"] = {c.p1, c.p2};
  out.summary["constants"] = c.constants;
  out.summary["parameters"] = params;
  const std::optional<int> ff = first_feasible(out.trace);
  out.summary["first_feasible_iteration"] = ff ? nlohmann::json(*ff) : nlohmann::json(nullptr);
  out.summary["x_true_objective"] = problem.value(inst.x_true);
  out.exit_code = exit_code_of(out.trace);
  return out;
}

ExperimentOutcome run_trust_region_experiment(const ExperimentConfig& c) {
  const TrustRegionInstance inst = generate_trust_region(c.n, c.m, c.p, c.seed);
  const GaugeOracle constraint(inst.shifted_constraint(), Vec::Zero(static_cast<Eigen::Index>(c.n)));
  RadialOptions ro;
  ro.seed = c.seed;
  const FiniteMaxProblem problem = radial_dual_problem(inst.shifted_objective(), constraint, ro);
  const Vec y0 = Vec::Zero(static_cast<Eigen::Index>(c.n));
  nlohmann::json params;
  ExperimentOutcome out;
  out.trace = run_method(problem, y0, c, 2.0 * constraint.R(), &params);
  out.summary = base_summary(c, out.trace);
  out.summary["m"] = c.m;
  out.summary["p"] = c.p;
  out.summary["parameters"] = params;
  const PrimalPoint pp = recover_primal(problem, out.trace.best_point);
  out.summary["primal_objective"] = inst.original_objective_of_shifted(pp.x);
  out.summary["shifted_objective"] = pp.objective;
  out.summary["constraint_gauge"] = constraint.value(pp.x);
  out.exit_code = exit_code_of(out.trace);
  return out;
}

ExperimentOutcome run_experiment(const ExperimentConfig& c) {
  ExperimentOutcome out;
  if (c.subcommand == "feasibility") out = run_feasibility_experiment(c);
  else if (c.subcommand == "trust-region") out = run_trust_region_experiment(c);
  else throw Error(ErrorCode::invalid_argument, "unknown experiment '" + c.subcommand + "'");
  if (!c.out_path.empty()) {
    std::ofstream f(c.out_path);
    if (!f) throw std::runtime_error("cannot open " + c.out_path);
    write_trace_csv(out.trace, f);
    if (!f) throw std::runtime_error("write failed: " + c.out_path);
  }
  if (!c.summary_path.empty()) {
    std::ofstream f(c.summary_path);
    if (!f) throw std::runtime_error("cannot open " + c.summary_path);
    f << out.summary.dump(2) << '\n';
  }
  return out;
}

nlohmann::json certify(const StructuredSet& set, const Vec& e, std::size_t samples,
                       std::uint64_t seed) {
  const StructureConstants sc = structure_constants(set);
  const GaugeOracle oracle(set, e);
  const GaugeStructure gs = global_structure(oracle);
  const auto t0 = std::chrono::steady_clock::now();
  const SampledConstants est = estimate_constants_by_sampling(oracle, samples, seed);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("inf"); };
  return {{"set", to_json(set)},
          {"alpha", num(sc.alpha)},
          {"beta", num(sc.beta)},
          {"R", num(oracle.R())},
          {"D", num(oracle.D())},
          {"M", num(oracle.lipschitz_M())},
          {"mu", num(gs.mu)},
          {"L", num(gs.L)},
          {"samples", samples},
          {"mu_est", num(est.mu_est)},
          {"L_est", num(est.L_est)},
          {"sampling_seconds", secs}};
}

}  // namespace gaugeopt
