#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaugeopt/experiments.hpp"
#include "gaugeopt/verify.hpp"

using namespace gaugeopt;

namespace {

void add_run_options(CLI::App* app, ExperimentConfig& c) {
  app->add_option("--n", c.n, "dimension")->check(CLI::Range(2, 1 << 20));
  app->add_option("--seed", c.seed, "instance seed");
  app->add_option("--method", c.method, "subgrad | gengrad | accel | level | armijo")
      ->check(CLI::IsMember({"subgrad", "gengrad", "accel", "level", "armijo"}));
  app->add_option("--schedule", c.schedule,
                  "constant | invsqrt | inverse | theorem | theorem-sc | theorem-gengrad | inverse-L");
  app->add_option("--eta", c.eta, "base step for the simple schedules");
  app->add_option("--iters", c.iters, "iterations")->check(CLI::NonNegativeNumber);
  app->add_option("--time-budget", c.time_budget_s, "stop after this many seconds");
  app->add_option("--M", c.M, "Lipschitz constant override");
  app->add_option("--D", c.D, "distance bound override");
  app->add_option("--p-star", c.p_star, "optimal value override");
  app->add_option("--L", c.L, "smoothness override");
  app->add_option("--mu", c.mu, "strong convexity override");
  app->add_option("--t0", c.t0, "accelerated method t0");
  app->add_option("--f-bar", c.f_bar, "level method target");
  app->add_option("--armijo-s", c.armijo_s);
  app->add_option("--armijo-tau", c.armijo_tau);
  app->add_option("--armijo-c", c.armijo_c);
  app->add_option("--out", c.out_path, "trace CSV path");
  app->add_option("--summary", c.summary_path, "summary JSON path (stdout when empty)");
}

nlohmann::json read_json_arg(const std::string& arg) {
  std::ifstream f(arg);
  if (f) return nlohmann::json::parse(f);
  return nlohmann::json::parse(arg);
}

int run(const ExperimentConfig& c) {
  const ExperimentOutcome out = run_experiment(c);
  if (c.summary_path.empty()) std::cout << out.summary.dump(2) << '\n';
  if (out.exit_code == 2) std::cerr << "diverged\n";
  if (out.exit_code == 3) std::cerr << "target level is infeasible\n";
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection-free first-order methods over smooth and strongly convex sets"};
  app.require_subcommand(1);

  ExperimentConfig feas;
  feas.subcommand = "feasibility";
  auto* f = app.add_subcommand("feasibility", "two p-norm ellipsoid feasibility benchmark");
  add_run_options(f, feas);
  f->add_option("--p1", feas.p1)->check(CLI::PositiveNumber);
  f->add_option("--p2", feas.p2)->check(CLI::PositiveNumber);
  f->add_option("--constants", feas.constants, "smoothness metadata: rigorous bounds or sampled")
      ->check(CLI::IsMember({"rigorous", "sampled"}));
  f->add_flag_callback("--full-scale", [&] { feas.n = 1600; }, "use n = 1600");

  ExperimentConfig tr;
  tr.subcommand = "trust-region";
  tr.n = 50;
  tr.m = 25;
  auto* t = app.add_subcommand("trust-region", "quadratic objective over a p-norm ellipsoid");
  add_run_options(t, tr);
  t->add_option("--m", tr.m, "rows of A")->check(CLI::PositiveNumber);
  t->add_option("--p", tr.p)->check(CLI::PositiveNumber);

  std::string set_arg, center_arg;
  std::size_t samples = 100000;
  std::uint64_t cert_seed = 0;
  auto* cert = app.add_subcommand("certify", "report structure constants of a set");
  cert->add_option("--set", set_arg, "set JSON or path to a JSON file")->required();
  cert->add_option("--e", center_arg, "center as a JSON array (origin by default)");
  cert->add_option("--samples", samples, "boundary samples for the estimate");
  cert->add_option("--seed", cert_seed);

  std::size_t cases = 1000;
  std::uint64_t verify_seed = 1;
  std::string report_path;
  auto* ver = app.add_subcommand("verify", "run every oracle agreement suite");
  ver->add_option("--cases", cases, "cases per suite");
  ver->add_option("--seed", verify_seed);
  ver->add_option("--report", report_path, "write the JSON report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*f) return run(feas);
    if (*t) return run(tr);
    if (*cert) {
      const StructuredSet set = set_from_json(read_json_arg(set_arg));
      Vec e = Vec::Zero(static_cast<Eigen::Index>(set.dimension()));
      if (!center_arg.empty()) {
        const auto v = read_json_arg(center_arg).get<std::vector<double>>();
        e = Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
      }
      std::cout << certify(set, e, samples, cert_seed).dump(2) << '\n';
      return 0;
    }
    if (*ver) {
      const auto results = verify::run_all_suites(cases, verify_seed);
      nlohmann::json all = nlohmann::json::array();
      bool ok = true;
      for (const auto& r : results) {
        std::printf("%-4s %-36s cases=%zu max_rel=%.3e violations=%zu%s\n",
                    r.passed() ? "ok" : "FAIL", r.report.name.c_str(), r.report.case_count,
                    r.report.max_rel_error, r.report.violations,
                    r.expect_violations ? " (control)" : "");
        ok = ok && r.passed();
        all.push_back(verify::to_json(r));
      }
      if (!report_path.empty()) std::ofstream(report_path) << all.dump(2) << '\n';
      return ok ? 0 : 1;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
