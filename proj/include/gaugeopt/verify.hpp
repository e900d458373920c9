#pragma once

// Slow, independent reference computations used to check the fast paths:
// membership bisection, finite differences, Jacobi eigenvalues, support
// enumeration for the small step QPs, sampling of ball certificates and
// reference solvers. Nothing here calls the closed forms it is meant to check.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaugeopt/instances.hpp"
#include "gaugeopt/steps.hpp"
#include "gaugeopt/random.hpp"
#include "gaugeopt/sets.hpp"

namespace gaugeopt::verify {

struct OracleReport {
  std::string name;
  std::size_t case_count = 0;
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;
  std::size_t violations = 0;  // cases beyond the suite tolerance
  nlohmann::json worst_case_input;

  void add(double abs_err, double rel_err, const nlohmann::json& input);
};

nlohmann::json to_json(const OracleReport& r);

/// Gauge by bisection on membership along the ray, bracketed by |y-e|/D and |y-e|/R.
double gauge_bisection(const StructuredSet& set, const Vec& e, const Vec& y, double tol = 1e-14);

using ScalarFn = std::function<double(const Vec&)>;

Vec finite_diff_gradient(const ScalarFn& fn, const Vec& y, double h);
/// Central second differences, symmetrized.
Mat finite_diff_hessian(const ScalarFn& fn, const Vec& y, double h);
/// 1e-5 max(1, |y|)
double default_fd_step(const Vec& y);

/// Cyclic Jacobi; eigenvalues ascending.
Vec symmetric_eigs(const Mat& M);

enum class QpKind { prox_linear, level_projection };

struct QpSolution {
  Vec z;
  std::vector<std::size_t> support;
  std::vector<double> multipliers;
};

/// Exact solution of the generalized gradient (alpha) or level projection
/// (f_bar) subproblem built from h_i and a_i, by trying every support.
QpSolution small_qp_enumerate(QpKind kind, const std::vector<double>& h, const std::vector<Vec>& a,
                              const Vec& y, double alpha_or_fbar);

enum class CertificateKind { outer, inner };

/// Samples points of B(near, radius). For an outer certificate every sampled
/// member of the set must lie in the ball; for an inner certificate every
/// sampled point of the ball must be a member. Violations beyond 1e-8 counted.
OracleReport containment_sample(CertificateKind kind, const Ball& certificate,
                                const StructuredSet& set, const Vec& near, double radius,
                                std::size_t count, std::uint64_t seed);

/// Dense Gaussian elimination with partial pivoting; nullopt if singular.
std::optional<Vec> gauss_solve(Mat A, Vec b);

struct ReferenceResult {
  Vec x;
  double value = 0.0;
  double accuracy = 0.0;  // bound on |value - optimum| (duality gap or KKT residual)
  int iterations = 0;
};

/// max 1 - x^T Q x / 2 - c^T x over |A x - b|_2 <= tau: root finding on the
/// multiplier of the single constraint. `accuracy` is the KKT residual.
ReferenceResult reference_trust_region_p2(const QuadraticObjective& q, const PNormEllipsoid& set);

/// Same problem for any p by a log-barrier Newton method started at x = 0,
/// which must be strictly feasible. `accuracy` is the final duality gap.
ReferenceResult reference_trust_region_barrier(const QuadraticObjective& q, const PNormEllipsoid& set);

/// Stationarity and complementarity residual of a candidate trust-region solution.
double trust_region_kkt_residual(const QuadraticObjective& q, const PNormEllipsoid& set,
                                 const Vec& x);

/// min_y max_i gauge_i(y) for p-norm ellipsoid gauges, by a barrier method on
/// the epigraph {(y, t) : |A_i (y - e_i) - t (b_i - A_i e_i)|_p <= t tau_i}.
/// `value` is the final epigraph height, an upper bound within `accuracy` of p*.
ReferenceResult reference_min_max_gauge(const std::vector<GaugeOracle>& oracles, const Vec& y0);

/// Dispatch used by the CLI: feasibility -> epigraph barrier from e_1;
/// trust region (shifted coordinates) -> multiplier root finding for p = 2, barrier otherwise.
ReferenceResult reference_solve(const FeasibilityInstance& inst);
ReferenceResult reference_solve(const TrustRegionInstance& inst);

// Agreement suites. Each draws `cases` random inputs from `seed`, compares a
// candidate implementation (the library's by default) against an oracle
// above and counts cases beyond `tolerance`. Negative controls pass a
// corrupted candidate and expect violations.

struct SuiteResult {
  OracleReport report;
  double tolerance = 0.0;
  bool expect_violations = false;
  double seconds = 0.0;

  bool passed() const {
    return expect_violations ? report.violations > 0 : report.violations == 0;
  }
};

nlohmann::json to_json(const SuiteResult& r);

enum class GaugeFamily { halfspace, euclidean, quartic, general_p };
const char* to_string(GaugeFamily f);

using GaugeCandidate = std::function<double(const GaugeOracle&, const Vec&)>;
using StepCandidate = std::function<Vec(const Linearization&, double)>;
using HessianCandidate = std::function<Mat(const Vec& y_bar, const Vec& zeta, double r)>;
using Rank2Candidate = std::function<std::pair<double, double>(const Vec&, const Vec&, double,
                                                               double, double)>;

SuiteResult gauge_agreement_suite(GaugeFamily family, std::size_t cases, std::uint64_t seed,
                                  GaugeCandidate candidate = {});
SuiteResult gen_grad_suite(std::size_t cases, std::uint64_t seed, StepCandidate candidate = {});
SuiteResult level_proj_suite(std::size_t cases, std::uint64_t seed, StepCandidate candidate = {});
/// Relative Frobenius error of the Hessian of gamma_B^2 / 2 against finite differences.
SuiteResult hessian_fd_suite(std::size_t cases, std::uint64_t seed, HessianCandidate candidate = {});
/// hessian_eigenvalues against Jacobi on the explicit Hessian.
SuiteResult hessian_eigen_suite(std::size_t cases, std::uint64_t seed);
SuiteResult rank2_eigen_suite(std::size_t cases, std::uint64_t seed, Rank2Candidate candidate = {});
/// Jacobi spectrum of the tightness witness against the displayed extreme eigenvalues.
SuiteResult witness_eigen_suite(std::size_t cases, std::uint64_t seed);
/// Outer certificate of the 1.5-norm ball at its diagonal boundary point with
/// mu scaled by `mu_scale`; 1 is sound, 2 must be flagged.
SuiteResult pnorm_certificate_suite(double mu_scale, std::size_t count, std::uint64_t seed);

namespace controls {
/// 2-norm gauge with the wrong root of the quadratic.
double sign_flipped_radical_gauge(const GaugeOracle& oracle, const Vec& y);
/// m = 2 generalized gradient step with the multiplier of the wrong component.
Vec swapped_weight_gen_grad(const Linearization& lin, double alpha);
}  // namespace controls

/// Every suite above including the negative controls.
std::vector<SuiteResult> run_all_suites(std::size_t cases, std::uint64_t seed);

}  // namespace gaugeopt::verify
