#pragma once

// Benchmark runs behind the command line tool.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "gaugeopt/instances.hpp"
#include "gaugeopt/solvers.hpp"

namespace gaugeopt {

struct ExperimentConfig {
  std::string subcommand = "feasibility";  // or trust-region
  std::size_t n = 100;
  std::size_t m = 50;
  double p1 = 2.0, p2 = 2.0;  // feasibility exponents
  double p = 2.0;             // trust-region exponent
  std::uint64_t seed = 42;
  std::string method = "accel";  // subgrad | gengrad | accel | level | armijo
  std::string schedule;          // empty selects the method default
  double eta = 1.0;              // constant / inverse-sqrt / inverse schedules
  std::optional<double> M, D, p_star, L, mu, t0, f_bar;
  double armijo_s = 1.0, armijo_tau = 0.5, armijo_c = 1e-4;
  std::string constants = "rigorous";  // or sampled (feasibility only)
  int iters = 500;
  double time_budget_s = kInf;
  std::string out_path;      // trace CSV, skipped when empty
  std::string summary_path;  // summary JSON, skipped when empty
};

struct ExperimentOutcome {
  Trace trace;
  nlohmann::json summary;
  int exit_code = 0;  // 0 ok, 2 diverged, 3 infeasible target
};

/// Runs `config.method` on a problem with starting point y0. `D_default` is
/// used by the theorem schedules when no D override is given.
Trace run_method(const FiniteMaxProblem& problem, const Vec& y0, const ExperimentConfig& config,
                 double D_default, nlohmann::json* used_parameters = nullptr);

ExperimentOutcome run_feasibility_experiment(const ExperimentConfig& config);
ExperimentOutcome run_trust_region_experiment(const ExperimentConfig& config);
/// Dispatches on `config.subcommand` and writes the requested files.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

/// Constants report for one set about center e.
nlohmann::json certify(const StructuredSet& set, const Vec& e, std::size_t samples,
                       std::uint64_t seed);

}  // namespace gaugeopt
