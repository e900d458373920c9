// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gaugeopt/experiments.hpp"
#include "gaugeopt/verify.hpp"

using namespace gaugeopt;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

// ---------------------------------------------------------------- 1

void sampled_constant() {
  const GaugeOracle o(StructuredSet::pnorm_ball(3, Vec::Zero(2)), Vec::Zero(2));
  const auto t0 = Clock::now();
  const SampledConstants est = estimate_constants_by_sampling(o, 100000, 0);
  const double secs = since(t0);
  report(1, std::abs(est.L_est - 2.1424) <= 0.01 && secs < 5.0,
         fmt("p=3 unit ball n=2, 1e5 samples: L_est=%.6f (target 2.1424 +- 0.01), %.2f s", est.L_est,
             secs));
}

// ---------------------------------------------------------------- 2

void table_rows() {
  Rng rng(2024);
  int checks = 0, bad = 0;
  std::string first_bad;
  auto expect = [&](double got, double want, const char* what) {
    ++checks;
    if (close_rel(got, want, 1e-12)) return;
    if (bad++ == 0) first_bad = fmt(" (first mismatch: %s %.17g vs %.17g)", what, got, want);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + trial % 6);
    // halfspace
    const Vec a = rng.normal_vec(n);
    const double b = 0.1 + rng.uniform();
    const StructuredSet h = StructuredSet::halfspace(a, b);
    const StructureConstants hs = structure_constants(h);
    expect(hs.alpha, 0.0, "h alpha");
    expect(hs.beta, 0.0, "h beta");  // "infinitely smooth" encoding
    const GaugeStructure hg = global_structure(GaugeOracle(h, Vec::Zero(n)));
    expect(hg.mu, 0.0, "h mu");
    expect(hg.L, a.squaredNorm() / (b * b), "h L");

    // unit 2-ball: set and gauge constants are all 1 (tight local values)
    const StructuredSet ball = StructuredSet::pnorm_ball(2, Vec::Zero(n));
    const StructureConstants bs = structure_constants(ball);
    expect(bs.alpha, 1.0, "B alpha");
    expect(bs.beta, 1.0, "B beta");
    const GaugeOracle bo(ball, Vec::Zero(n));
    const LocalStructure ls = local_structure(bo, bo.eval(rng.normal_vec(n)));
    expect(ls.mu_local, 1.0, "B mu_local");
    expect(ls.L_local, 1.0, "B L_local");
    const GaugeStructure be = exact_structure(bo);
    expect(be.mu, 1.0, "B mu");
    expect(be.L, 1.0, "B L");

    // 2-norm ellipsoid {|A x - b| <= 1} seen from the origin
    const Mat A = rng.normal_mat(n, n) + 2.0 * Mat::Identity(n, n);
    const Vec c = (0.9 * rng.uniform()) * rng.unit_vec(n);
    const StructuredSet E = StructuredSet::pnorm_ellipsoid(A, c, 2, 1);
    Eigen::SelfAdjointEigenSolver<Mat> eig(A.transpose() * A);
    const double lmin = eig.eigenvalues().minCoeff(), lmax = eig.eigenvalues().maxCoeff();
    const StructureConstants es = structure_constants(E);
    expect(es.alpha, lmin / std::sqrt(lmax), "E alpha");
    expect(es.beta, lmax / std::sqrt(lmin), "E beta");
    const GaugeStructure eg = global_structure(GaugeOracle(E, Vec::Zero(n)));
    const double nb = c.norm();
    expect(eg.mu, lmin / ((1 + nb) * (2 + nb)), "E mu");
    expect(eg.L, lmax * (2 - nb) / ((1 - nb) * (1 - nb)), "E L");
  }
  report(2, bad == 0,
         fmt("halfspace, unit 2-ball and 2-norm ellipsoid closed forms: %d/%d agree to 1e-12%s",
             checks - bad, checks, first_bad.c_str()));
}

// ---------------------------------------------------------------- 3, 4, 9

std::string describe(const verify::SuiteResult& r) {
  return fmt("%s max_rel=%.1e viol=%zu %.2fs", r.report.name.c_str(), r.report.max_rel_error,
             r.report.violations, r.seconds);
}

void hessian_suites() {
  const std::vector<verify::SuiteResult> rs{
      verify::hessian_fd_suite(1000, 31), verify::hessian_eigen_suite(1000, 32),
      verify::rank2_eigen_suite(1000, 33), verify::witness_eigen_suite(1000, 34)};
  bool ok = true;
  std::string detail;
  for (const auto& r : rs) {
    ok = ok && r.passed();
    detail += describe(r) + "; ";
  }
  report(3, ok, detail);
}

void agreement_suites() {
  std::vector<verify::SuiteResult> rs;
  for (auto f : {verify::GaugeFamily::halfspace, verify::GaugeFamily::euclidean,
                 verify::GaugeFamily::quartic, verify::GaugeFamily::general_p})
    rs.push_back(verify::gauge_agreement_suite(f, 1000, 41));
  rs.push_back(verify::gen_grad_suite(1000, 42));
  rs.push_back(verify::level_proj_suite(1000, 43));
  bool ok = true;
  std::string detail;
  for (const auto& r : rs) {
    ok = ok && r.passed() && r.seconds < 30.0;
    detail += describe(r) + "; ";
  }
  report(4, ok, detail);
}

void negative_controls() {
  const verify::SuiteResult sound = verify::pnorm_certificate_suite(1.0, 2000, 91);
  const verify::SuiteResult inflated = verify::pnorm_certificate_suite(2.0, 2000, 91);
  const verify::SuiteResult radical = verify::gauge_agreement_suite(
      verify::GaugeFamily::euclidean, 1000, 92, verify::controls::sign_flipped_radical_gauge);
  const verify::SuiteResult swapped =
      verify::gen_grad_suite(1000, 93, verify::controls::swapped_weight_gen_grad);
  const bool ok = sound.report.violations == 0 && inflated.report.violations > 0 &&
                  radical.report.violations > 0 && swapped.report.violations > 0;
  report(9, ok,
         fmt("sound p=1.5 certificate viol=%zu; 2x mu certificate viol=%zu; sign-flipped radical "
             "viol=%zu/%zu; swapped gen-grad weight viol=%zu/%zu",
             sound.report.violations, inflated.report.violations, radical.report.violations,
             radical.report.case_count, swapped.report.violations, swapped.report.case_count));
}

// ---------------------------------------------------------------- 5

struct BoundTally {
  int checked = 0, violated = 0, skipped = 0;
  double worst_ratio = 0.0;  // max lhs / rhs
  void add(double lhs, double rhs) {
    ++checked;
    if (!(lhs <= rhs)) ++violated;
    if (rhs > 0) worst_ratio = std::max(worst_ratio, lhs / rhs);
  }
};

void theorem_bounds() {
  const auto t0 = Clock::now();
  std::map<std::string, BoundTally> tally;
  const std::vector<int> Ts{10, 100, 1000};
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const FeasibilityInstance inst = generate_feasibility(50, 2.0, 2.0, 500 + seed);
    const FiniteMaxProblem prob = inst.problem();
    const verify::ReferenceResult ref = verify::reference_solve(inst);
    const double acc = ref.accuracy;
    const double M = prob.M(), mu = prob.mu(), L = prob.L();
    // p* lies in [value - acc, value]; every bound is evaluated at the end
    // that makes it smaller, every left-hand side at its largest value.
    const double ps_hi = ref.value, ps_lo = ref.value - acc;
    // |y_ref - y*|^2 <= (f^2(y_ref) - p*^2) / mu by strong convexity of f^2 / 2
    const double r_ref = std::sqrt(std::max(0.0, ps_hi * ps_hi - ps_lo * ps_lo) / mu);
    auto low = [&](const std::function<double(double)>& bound) {
      return std::min(bound(ps_lo), bound(ps_hi));
    };
    auto min_gap = [&](const Trace& t, int T) {
      double best = kInf;
      for (int k = 0; k <= T && k < static_cast<int>(t.rows.size()); ++k)
        best = std::min(best, t.rows[k].objective);
      return best - ps_lo;
    };

    Rng rng(700 + seed);
    const Vec u = rng.unit_vec(static_cast<Eigen::Index>(inst.n));
    const std::vector<Vec> starts{inst.e[0], Vec(ref.x + 0.5 * std::sqrt(11.0) * ps_lo / M * u)};
    for (const Vec& y0 : starts) {
      const double D = (y0 - ref.x).norm() + r_ref;
      const double f0 = prob.value(y0);
      for (int T : Ts) {
        const double Tp = T + 1.0;
        // subgradient, both schedules
        tally["subgrad nonsmooth"].add(
            min_gap(run_subgradient(prob, y0, schedule::TheoremSubgrad{D, T}, T), T),
            low([&](double p) { return M * D / std::sqrt(Tp) + M * M * D * D / (2 * p * Tp); }));
        tally["subgrad strongly convex"].add(
            min_gap(run_subgradient(prob, y0, schedule::TheoremSC{mu, M}, T), T),
            low([&](double p) {
              return 4 * M * M * p / (mu * (T + 2)) + 4 * std::pow(M, 4) * D * D / (mu * p * Tp * (T + 2));
            }));
        // generalized gradient, four regimes
        if (Tp >= M * M * D * D / (ps_lo * ps_lo)) {
          tally["gengrad nonsmooth"].add(
              min_gap(run_gen_gradient(prob, y0, schedule::TheoremGenGrad{D, M, ps_hi, T}, T), T),
              2 * M * D / std::sqrt(Tp));
        } else {
          ++tally["gengrad nonsmooth"].skipped;
        }
        tally["gengrad strongly convex"].add(
            min_gap(run_gen_gradient(prob, y0, schedule::TheoremSC{mu, M}, T), T),
            low([&](double p) {
              return 4 * M * M * p / (mu * (T + 2)) + 2 * std::pow(M, 4) * D * D / (mu * p * Tp * (T + 2));
            }));
        SolverOptions keep;
        keep.record_iterates = true;
        const Trace gg = run_gen_gradient(prob, y0, schedule::InverseL{L}, T, keep);
        tally["gengrad smooth"].add(gg.rows[T].objective - ps_lo,
                                low([&](double p) { return L * D * D * p / T; }));
        const double dist = (gg.iterates[T] - ref.x).norm() + r_ref;
        tally["gengrad smooth strongly convex"].add(dist * dist, std::pow(1 - mu / L, T) * D * D);
        // accelerated, without and with strong convexity
        const double tg = default_t0(0.0, L);
        const double g0 = accel_gamma0(tg, L, 0.0);
        const Trace a0 = run_accelerated(prob, y0, L, 0.0, tg, T);
        tally["accel smooth"].add(a0.rows[T].objective - ps_lo, low([&](double p) {
          return (0.5 * f0 * f0 - 0.5 * p * p + 0.5 * g0 * D * D) / p * 4 * L /
                 std::pow(2 * std::sqrt(L) + T * std::sqrt(g0), 2);
        }));
        const double ts = default_t0(mu, L);
        const double gs = accel_gamma0(ts, L, mu);
        const Trace a1 = run_accelerated(prob, y0, L, mu, ts, T);
        tally["accel strongly convex"].add(a1.rows[T].objective - ps_lo, low([&](double p) {
          return (0.5 * f0 * f0 - 0.5 * p * p + 0.5 * gs * D * D) / p *
                 std::pow(1 - std::sqrt(mu / L), T);
        }));
        // level method at the target f_bar = value, reached by y_ref itself
        const double fb = ps_hi;
        const double Dl = (y0 - ref.x).norm();
        const Trace lv = run_level(prob, y0, fb, T);
        double best = kInf;
        for (const TraceRow& r : lv.rows) best = std::min(best, r.objective);
        tally["level"].add(best - fb, M * Dl / std::sqrt(Tp) + 2 * M * M * Dl * Dl / (fb * Tp));
      }
    }
  }
  const double secs = since(t0);
  bool ok = secs < 120.0;
  std::string detail;
  for (const auto& [name, t] : tally) {
    ok = ok && t.violated == 0 && t.checked > 0;
    detail += fmt("%s %d/%d ok (worst lhs/rhs %.2g%s); ", name.c_str(), t.checked - t.violated,
                  t.checked, t.worst_ratio,
                  t.skipped ? fmt(", %d precondition-skipped", t.skipped).c_str() : "");
  }
  report(5, ok, detail + fmt("%.1f s", secs));
}

// ---------------------------------------------------------------- 6

struct Fig2Instance {
  FeasibilityInstance inst;
  double p_star;
};

// reference_solve resolves p* to this squared gap
constexpr double kRankFloor = 1e-12;

double squared_gap(double f, double ps) { return std::max(0.0, 0.5 * f * f - 0.5 * ps * ps); }

double final_gap(const Trace& t, double ps) {
  if (t.diverged || t.rows.empty()) return kInf;
  return squared_gap(t.rows.back().best_so_far, ps);
}

// R^2 of a least-squares line through log(gap) over the last 200 iterations
// before the gap first reaches `floor` (the final 200 when it never does).
double linear_fit_r2(const Trace& t, double ps, double floor) {
  std::vector<double> g;
  for (const TraceRow& r : t.rows) g.push_back(squared_gap(r.best_so_far, ps));
  int end = static_cast<int>(g.size());
  for (int k = 0; k < end; ++k)
    if (g[k] <= floor) {
      end = k;
      break;
    }
  const int beg = std::max(0, end - 200);
  const double n = end - beg;
  if (n < 3) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int k = beg; k < end; ++k) {
    const double x = k, y = std::log(g[k]);
    sx += x, sy += y, sxx += x * x, sxy += x * y, syy += y * y;
  }
  const double cxx = sxx - sx * sx / n, cxy = sxy - sx * sy / n, cyy = syy - sy * sy / n;
  return cyy > 0 ? cxy * cxy / (cxx * cyy) : 1.0;
}

using Params = std::array<double, 2>;
using Runner = std::function<Trace(const FiniteMaxProblem&, const Vec&, const Params&)>;

struct Method {
  std::string name;
  Runner run;
  int tuned = 0;  // how many leading parameters are tuned
  Params param{0.0, 0.0};
};

// Worst case over the tuning instances of the mean log gap along the run.
// Averaging over iterations rewards speed without ties at the floor, and the
// worst case rejects parameters that stall on some instance.
double tuning_score(const Runner& run, const Params& param, const std::vector<Fig2Instance>& insts) {
  double worst = -kInf;
  for (const Fig2Instance& fi : insts) {
    const Trace t = run(fi.inst.problem(), fi.inst.e[0], param);
    double area = 0.0;
    if (t.diverged) {
      area = 6.0;
    } else {
      for (const TraceRow& r : t.rows)
        area += std::log10(std::min(squared_gap(r.best_so_far, fi.p_star), 1e6) + 1e-16);
      area /= static_cast<double>(t.rows.size());
    }
    worst = std::max(worst, area);
  }
  return worst;
}

// Coordinate-wise search on a 1-2-5 grid minimizing tuning_score. The second
// parameter (mu) may also be 0 and stays below the first.
Params tune(const Method& m, const std::vector<Fig2Instance>& insts) {
  Params best = m.param;
  for (int coord = 0; coord < m.tuned; ++coord) {
    std::vector<double> grid;
    if (coord == 1) grid.push_back(0.0);
    for (int e = -6; e <= 3; ++e)
      for (double x : {1.0, 2.0, 5.0}) grid.push_back(x * std::pow(10.0, e));
    double best_score = kInf;
    Params trial = best;
    for (double g : grid) {
      if (coord == 1 && g >= best[0]) break;
      trial[coord] = g;
      const double score = tuning_score(m.run, trial, insts);
      if (score < best_score) best_score = score, best[coord] = g;
    }
  }
  return best;
}

Fig2Instance fig2_instance(double p1, double p2, std::uint64_t seed) {
  FeasibilityInstance inst = generate_feasibility(100, p1, p2, seed);
  const double ps = verify::reference_solve(inst).value;
  return {std::move(inst), ps};
}

void figure2_ordering() {
  const auto t0 = Clock::now();
  const int iters = 500;
  const int seeds = 50;
  struct Config {
    double p1, p2;
  };
  const std::vector<Config> configs{{1.5, 1.8}, {2.0, 2.0}, {3.0, 4.0}};
  std::string detail;
  bool ok = true;
  for (const Config& cfg : configs) {
    std::vector<Fig2Instance> tuning;
    for (std::uint64_t s = 0; s < 10; ++s) tuning.push_back(fig2_instance(cfg.p1, cfg.p2, 9000 + s));
    std::vector<Method> methods{
        {"subgrad-const",
         [&](const FiniteMaxProblem& p, const Vec& y, const Params& q) {
           return run_subgradient(p, y, schedule::Constant{q[0]}, iters);
         },
         1},
        {"subgrad-invsqrt",
         [&](const FiniteMaxProblem& p, const Vec& y, const Params& q) {
           return run_subgradient(p, y, schedule::InverseSqrt{q[0]}, iters);
         },
         1},
        {"gengrad-const",
         [&](const FiniteMaxProblem& p, const Vec& y, const Params& q) {
           return run_gen_gradient(p, y, schedule::Constant{q[0]}, iters);
         },
         1},
        {"gengrad-invsqrt",
         [&](const FiniteMaxProblem& p, const Vec& y, const Params& q) {
           return run_gen_gradient(p, y, schedule::InverseSqrt{q[0]}, iters);
         },
         1},
        {"level-one",
         [&](const FiniteMaxProblem& p, const Vec& y, const Params&) { return run_level(p, y, 1.0, iters); },
         0},
        // accelerated with tuned (L, mu); L is searched first with mu = 0
        {"accel",
         [&](const FiniteMaxProblem& p, const Vec& y, const Params& q) {
           return run_accelerated(p, y, q[0], q[1], default_t0(q[1], q[0]), iters);
         },
         2}};
    for (Method& m : methods)
      if (m.tuned) m.param = tune(m, tuning);

    std::vector<double> accel_gap, accel_r2, level_gap;
    int level_best = 0, ratio_ok = 0;
    double min_ratio = kInf, worst_acc = kInf, worst_sub = kInf;
    for (int s = 0; s < seeds; ++s) {
      const Fig2Instance fi = fig2_instance(cfg.p1, cfg.p2, static_cast<std::uint64_t>(s));
      const FiniteMaxProblem prob = fi.inst.problem();
      const Vec& y0 = fi.inst.e[0];
      const Trace lv = run_level(prob, y0, fi.p_star, iters);
      const double lgap = final_gap(lv, fi.p_star);
      double others = kInf, sub = kInf, acc = kInf;
      for (const Method& m : methods) {
        const Trace t = m.run(prob, y0, m.param);
        const double g = final_gap(t, fi.p_star);
        others = std::min(others, g);
        if (m.name.rfind("subgrad", 0) == 0) sub = std::min(sub, g);
        if (m.name == "accel") {
          acc = g;
          accel_r2.push_back(linear_fit_r2(t, fi.p_star, 1e-12));
        }
      }
      accel_gap.push_back(acc);
      level_gap.push_back(lgap);
      // gaps below the reference accuracy cannot be ranked
      if (lgap <= others + kRankFloor) ++level_best;
      const double ratio = sub / std::max(acc, kRankFloor);
      if (ratio < min_ratio) min_ratio = ratio, worst_acc = acc, worst_sub = sub;
      if (ratio >= 10.0) ++ratio_ok;
    }
    std::string tuned;
    for (const Method& m : methods)
      if (m.tuned == 1) tuned += fmt(" %s=%g", m.name.c_str(), m.param[0]);
      else if (m.tuned == 2) tuned += fmt(" %s=(L %g, mu %g)", m.name.c_str(), m.param[0], m.param[1]);
    if (cfg.p1 == 1.5) {
      const bool pass = level_best == seeds;
      ok = ok && pass;
      detail += fmt("(a) p=(1.5,1.8) level(p*) best on %d/%d seeds, median gap %.1e [tuned%s]; ",
                    level_best, seeds, median(level_gap), tuned.c_str());
    } else if (cfg.p1 == 2.0) {
      const double mg = median(accel_gap), mr = median(accel_r2);
      const auto frac_gap = std::count_if(accel_gap.begin(), accel_gap.end(), [](double g) { return g <= 1e-9; });
      const auto frac_r2 = std::count_if(accel_r2.begin(), accel_r2.end(), [](double r) { return r >= 0.95; });
      const bool pass = frac_gap == seeds && frac_r2 == seeds;
      ok = ok && pass;
      detail += fmt("(b) p=(2,2) accel median gap %.1e (%ld/%d <= 1e-9), median R^2 %.3f (%ld/%d >= 0.95); ",
                    mg, static_cast<long>(frac_gap), seeds, mr, static_cast<long>(frac_r2), seeds);
    } else {
      const bool pass = ratio_ok == seeds;
      ok = ok && pass;
      detail += fmt("(c) p=(3,4) best tuned subgrad / accel gap >= 10 on %d/%d seeds, min ratio %.3g "
                    "(accel %.1e vs subgrad %.1e), median accel gap %.1e [tuned%s]; ",
                    ratio_ok, seeds, min_ratio, worst_acc, worst_sub, median(accel_gap), tuned.c_str());
    }
  }
  report(6, ok, detail + fmt("%.1f s", since(t0)));
}

// ---------------------------------------------------------------- 7

void trust_region() {
  bool ok = true;
  std::string detail;
  for (double p : {2.0, 4.0}) {
    double worst_rel = 0.0, worst_gauge = 0.0, worst_secs = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto t0 = Clock::now();
      ExperimentConfig c;
      c.subcommand = "trust-region";
      c.n = 50;
      c.m = 25;
      c.p = p;
      c.seed = seed;
      c.method = "accel";
      c.iters = 20000;
      const ExperimentOutcome out = run_experiment(c);
      const TrustRegionInstance inst = generate_trust_region(50, 25, p, seed);
      const double want = inst.original_objective_of_shifted(verify::reference_solve(inst).x);
      const double got = out.summary["primal_objective"].get<double>();
      const double secs = since(t0);
      worst_rel = std::max(worst_rel, std::abs(got - want) / std::abs(want));
      worst_gauge = std::max(worst_gauge, out.summary["constraint_gauge"].get<double>());
      worst_secs = std::max(worst_secs, secs);
    }
    ok = ok && worst_rel <= 1e-4 && worst_gauge <= 1 + 1e-8 && worst_secs < 30.0;
    detail += fmt("p=%g: 5 instances, worst rel err %.1e, worst gauge %.12f, worst %.2f s; ", p,
                  worst_rel, worst_gauge, worst_secs);
  }
  report(7, ok, detail);
}

// ---------------------------------------------------------------- 8

void generator_statistics() {
  bool ok = true;
  std::string detail;
  for (auto [p1, p2] : {std::pair{1.5, 1.8}, std::pair{2.0, 2.0}, std::pair{3.0, 4.0}}) {
    int in[2] = {0, 0};
    const int seeds = 500;
    for (int s = 0; s < seeds; ++s) {
      const FeasibilityInstance inst = generate_feasibility(50, p1, p2, static_cast<std::uint64_t>(s));
      for (int i = 0; i < 2; ++i) in[i] += contains(inst.set(i), inst.x_true) ? 1 : 0;
    }
    for (int i = 0; i < 2; ++i) {
      const double frac = static_cast<double>(in[i]) / seeds;
      ok = ok && std::abs(frac - 0.975) <= 0.02;
      detail += fmt("p=(%g,%g) S%d %.3f; ", p1, p2, i + 1, frac);
    }
  }
  report(8, ok, detail + "over 500 seeds at n=50");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<void()>>> all{
      {1, sampled_constant}, {2, table_rows},        {3, hessian_suites},
      {4, agreement_suites}, {5, theorem_bounds},    {6, figure2_ordering},
      {7, trust_region},     {8, generator_statistics}, {9, negative_controls}};
  // optional arguments select criteria by number
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  for (const auto& [id, fn] : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    try {
      fn();
    } catch (const std::exception& ex) {
      report(id, false, std::string("threw: ") + ex.what());
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
