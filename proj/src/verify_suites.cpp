#include <algorithm>
#include <chrono>
#include <cmath>

#include "gaugeopt/error.hpp"
#include "gaugeopt/gauge.hpp"
#include "gaugeopt/verify.hpp"

namespace gaugeopt::verify {

namespace {

using Clock = std::chrono::steady_clock;

nlohmann::json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

double rel_diff(double a, double b) {
  const double s = std::max({std::abs(a), std::abs(b), 1e-300});
  return a == b ? 0.0 : std::abs(a - b) / s;
}

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

Eigen::Index dim(Rng& rng, int lo, int hi) {
  return lo + static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1));
}

SuiteResult finish(SuiteResult r, Clock::time_point start) {
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

void tally(SuiteResult& r, double abs_err, double rel_err, const nlohmann::json& input) {
  r.report.add(abs_err, rel_err, input);
  if (!(rel_err <= r.tolerance)) ++r.report.violations;
}

// A random oracle of the family with its center strictly inside.
GaugeOracle random_oracle(GaugeFamily family, Rng& rng) {
  const Eigen::Index n = dim(rng, 2, 10);
  Vec e = rng.normal_vec(n);
  switch (family) {
    case GaugeFamily::halfspace: {
      const Vec a = rng.normal_vec(n);
      const double b = uniform(rng, 0.2, 3.0);
      while (a.dot(e) > b - 0.1) e *= 0.5;
      return GaugeOracle(StructuredSet::halfspace(a, b), e);
    }
    case GaugeFamily::euclidean:
      if (rng.uniform() < 0.3) {
        const double r = uniform(rng, 0.3, 3.0);
        const Vec c = e + uniform(rng, 0.0, 0.9) * r * rng.unit_vec(n);
        return GaugeOracle(StructuredSet::ball(c, r), e);
      }
      [[fallthrough]];
    default: {
      double p = 2.0;
      if (family == GaugeFamily::quartic) p = 4.0;
      if (family == GaugeFamily::general_p) p = uniform(rng, 1.1, 6.0);
      const Eigen::Index m = std::max<Eigen::Index>(1, n + dim(rng, -1, 3));
      const Mat A = rng.normal_mat(m, n);
      const double tau = uniform(rng, 0.5, 2.0);
      const Vec u = rng.normal_vec(m);
      const Vec b = A * e + uniform(rng, 0.0, 0.9) * tau * u / pnorm(u, p);
      return GaugeOracle(StructuredSet::pnorm_ellipsoid(A, b, p, tau), e);
    }
  }
}

Linearization random_linearization(Rng& rng, std::size_t m) {
  const Eigen::Index n = dim(rng, 2, 10);
  Linearization lin;
  lin.y = rng.normal_vec(n);
  for (std::size_t i = 0; i < m; ++i) {
    const double f = uniform(rng, 0.1, 3.0);
    lin.f.push_back(f);
    lin.h.push_back(0.5 * f * f);
    lin.a.push_back(uniform(rng, 0.1, 3.0) * rng.normal_vec(n));
    if (f > lin.f[lin.argmax]) lin.argmax = i;
  }
  return lin;
}

double step_error(const Vec& z, const Vec& ref, const Vec& y) {
  return (z - ref).norm() / std::max(1.0, (ref - y).norm());
}

nlohmann::json lin_json(const Linearization& lin, double param) {
  nlohmann::json a = nlohmann::json::array();
  for (const Vec& v : lin.a) a.push_back(vec_json(v));
  return {{"y", vec_json(lin.y)}, {"h", lin.h}, {"a", a}, {"param", param}};
}

// Random (y_bar, zeta, r) with zeta^T y_bar >= 0.2 |y_bar|.
void random_ball_point(Rng& rng, Vec& yb, Vec& zeta, double& r) {
  const Eigen::Index n = dim(rng, 2, 10);
  yb = uniform(rng, 0.5, 3.0) * rng.unit_vec(n);
  do {
    zeta = rng.unit_vec(n);
  } while (zeta.dot(yb) < 0.2 * yb.norm());
  r = uniform(rng, 0.3, 3.0);
}

}  // namespace

const char* to_string(GaugeFamily f) {
  switch (f) {
    case GaugeFamily::halfspace: return "halfspace";
    case GaugeFamily::euclidean: return "euclidean";
    case GaugeFamily::quartic: return "quartic";
    case GaugeFamily::general_p: return "general_p";
  }
  return "unknown";
}

nlohmann::json to_json(const SuiteResult& r) {
  nlohmann::json j = to_json(r.report);
  j["tolerance"] = r.tolerance;
  j["expect_violations"] = r.expect_violations;
  j["passed"] = r.passed();
  j["seconds"] = r.seconds;
  return j;
}

SuiteResult gauge_agreement_suite(GaugeFamily family, std::size_t cases, std::uint64_t seed,
                                  GaugeCandidate candidate) {
  const auto start = Clock::now();
  SuiteResult r;
  r.report.name = std::string("gauge_") + to_string(family);
  r.tolerance = 1e-10;
  r.expect_violations = static_cast<bool>(candidate);
  if (!candidate) candidate = [](const GaugeOracle& o, const Vec& y) { return o.value(y); };
  Rng rng(seed);
  for (std::size_t k = 0; k < cases; ++k) {
    const GaugeOracle o = random_oracle(family, rng);
    const Vec y = o.center() + uniform(rng, 0.1, 5.0) * rng.normal_vec(static_cast<Eigen::Index>(o.dimension()));
    const double ref = gauge_bisection(o.set(), o.center(), y, 1e-14);
    const double got = candidate(o, y);
    tally(r, std::abs(got - ref), rel_diff(got, ref),
          {{"set", to_json(o.set())}, {"e", vec_json(o.center())}, {"y", vec_json(y)},
           {"bisection", ref}, {"candidate", got}});
  }
  return finish(std::move(r), start);
}

SuiteResult gen_grad_suite(std::size_t cases, std::uint64_t seed, StepCandidate candidate) {
  const auto start = Clock::now();
  SuiteResult r;
  r.report.name = "gen_grad_m2";
  r.tolerance = 1e-8;
  r.expect_violations = static_cast<bool>(candidate);
  if (!candidate)
    candidate = [](const Linearization& lin, double a) { return gen_grad_step(lin, a).next_point; };
  Rng rng(seed);
  for (std::size_t k = 0; k < cases; ++k) {
    const Linearization lin = random_linearization(rng, 2);
    const double alpha = std::exp(uniform(rng, std::log(1e-3), std::log(10.0)));
    const QpSolution ref = small_qp_enumerate(QpKind::prox_linear, lin.h, lin.a, lin.y, alpha);
    const Vec z = candidate(lin, alpha);
    const double err = step_error(z, ref.z, lin.y);
    tally(r, (z - ref.z).norm(), err, lin_json(lin, alpha));
  }
  return finish(std::move(r), start);
}

SuiteResult level_proj_suite(std::size_t cases, std::uint64_t seed, StepCandidate candidate) {
  const auto start = Clock::now();
  SuiteResult r;
  r.report.name = "level_proj_m2";
  r.tolerance = 1e-8;
  r.expect_violations = static_cast<bool>(candidate);
  if (!candidate)
    candidate = [](const Linearization& lin, double f) { return level_proj_step(lin, f).next_point; };
  Rng rng(seed);
  for (std::size_t k = 0; k < cases; ++k) {
    const Linearization lin = random_linearization(rng, 2);
    const double f_bar = uniform(rng, 0.1, 3.0);
    const QpSolution ref = small_qp_enumerate(QpKind::level_projection, lin.h, lin.a, lin.y, f_bar);
    const Vec z = candidate(lin, f_bar);
    tally(r, (z - ref.z).norm(), step_error(z, ref.z, lin.y), lin_json(lin, f_bar));
  }
  return finish(std::move(r), start);
}

SuiteResult hessian_fd_suite(std::size_t cases, std::uint64_t seed, HessianCandidate candidate) {
  const auto start = Clock::now();
  SuiteResult r;
  r.report.name = "ball_gauge_hessian_fd";
  r.tolerance = 1e-5;
  r.expect_violations = static_cast<bool>(candidate);
  if (!candidate) candidate = ball_gauge_hessian;
  Rng rng(seed);
  for (std::size_t k = 0; k < cases; ++k) {
    Vec yb, zeta;
    double rad;
    random_ball_point(rng, yb, zeta, rad);
    const Vec c = yb - rad * zeta;
    const ScalarFn half_sq = [&](const Vec& z) {
      const double g = ball_gauge(c, rad, z);
      return 0.5 * g * g;
    };
    // Richardson extrapolation of two central differences cancels the h^2 term.
    const double h = 1e-4 * std::max(1.0, yb.norm());
    const Mat fd = (4.0 * finite_diff_hessian(half_sq, yb, 0.5 * h) - finite_diff_hessian(half_sq, yb, h)) / 3.0;
    const Mat H = candidate(yb, zeta, rad);
    const double err = (fd - H).norm();
    tally(r, err, err / fd.norm(),
          {{"y_bar", vec_json(yb)}, {"zeta", vec_json(zeta)}, {"r", rad}});
  }
  return finish(std::move(r), start);
}

SuiteResult hessian_eigen_suite(std::size_t cases, std::uint64_t seed) {
  const auto start = Clock::now();
  SuiteResult r;
  r.report.name = "hessian_eigenvalues_jacobi";
  r.tolerance = 1e-10;
  Rng rng(seed);
  for (std::size_t k = 0; k < cases; ++k) {
    Vec yb, zeta;
    double rad;
    random_ball_point(rng, yb, zeta, rad);
    const Vec ev = symmetric_eigs(ball_gauge_hessian(yb, zeta, rad));
    const HessianSpectrum hs = hessian_eigenvalues(yb, zeta, rad);
    const Eigen::Index n = ev.size();
    const double scale = ev.cwiseAbs().maxCoeff();
    double err = std::max(std::abs(ev[0] - hs.min), std::abs(ev[n - 1] - hs.max));
    for (Eigen::Index i = 1; i + 1 < n; ++i) err = std::max(err, std::abs(ev[i] - hs.mid));
    tally(r, err, err / scale, {{"y_bar", vec_json(yb)}, {"zeta", vec_json(zeta)}, {"r", rad}});
  }
  return finish(std::move(r), start);
}

SuiteResult rank2_eigen_suite(std::size_t cases, std::uint64_t seed, Rank2Candidate candidate) {
  const auto start = Clock::now();
  SuiteResult r;
  r.report.name = "rank2_eigenvalues_jacobi";
  r.tolerance = 1e-10;
  r.expect_violations = static_cast<bool>(candidate);
  if (!candidate) candidate = rank2_eigenvalues;
  Rng rng(seed);
  for (std::size_t k = 0; k < cases; ++k) {
    const Eigen::Index n = dim(rng, 2, 10);
    const Vec a = rng.normal_vec(n), b = rng.normal_vec(n);
    const double C1 = rng.normal(), C2 = rng.normal(), C3 = rng.normal();
    const Mat M = C1 * a * a.transpose() + C2 * (a * b.transpose() + b * a.transpose()) +
                  C3 * b * b.transpose();
    const Vec ev = symmetric_eigs(M);
    // The two eigenvalues of largest magnitude, ascending; the rest vanish.
    std::vector<double> all(ev.data(), ev.data() + n);
    std::sort(all.begin(), all.end(), [](double x, double y) { return std::abs(x) > std::abs(y); });
    const double lo = std::min(all[0], all[1]), hi = std::max(all[0], all[1]);
    const auto [l1, l2] = candidate(a, b, C1, C2, C3);
    const double scale = std::max(std::abs(lo), std::abs(hi));
    const double err = std::max(std::abs(l1 - lo), std::abs(l2 - hi));
    tally(r, err, err / scale,
          {{"a", vec_json(a)}, {"b", vec_json(b)}, {"C", {C1, C2, C3}}});
  }
  return finish(std::move(r), start);
}

SuiteResult witness_eigen_suite(std::size_t cases, std::uint64_t seed) {
  const auto start = Clock::now();
  SuiteResult r;
  r.report.name = "tightness_witness_eigenvalues";
  r.tolerance = 1e-8;
  Rng rng(seed);
  for (std::size_t k = 0; k < cases; ++k) {
    const double gamma = std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
    const double R = uniform(rng, 0.2, 2.0);
    const double D = R * uniform(rng, 1.0, 4.0);
    const TightnessInstance w = tightness_instance(gamma, R, D);
    const auto* hull = w.set.get_if<HullBallOrigin>();
    // Near y_bar the hull coincides with its ball facet.
    const Vec ev = symmetric_eigs(ball_gauge_hessian(w.y_bar, w.zeta, hull->rho));
    const double q = R + gamma * D * D;
    const double root = std::sqrt(q * q - 4.0 * gamma * R * R * R);
    const double lmin = (q - root) / (2.0 * R * R * R);
    const double lmax = (q + root) / (2.0 * R * R * R);
    const double err = std::max(rel_diff(ev[0], lmin), rel_diff(ev[1], lmax));
    tally(r, std::max(std::abs(ev[0] - lmin), std::abs(ev[1] - lmax)), err,
          {{"gamma", gamma}, {"R", R}, {"D", D}});
  }
  return finish(std::move(r), start);
}

SuiteResult pnorm_certificate_suite(double mu_scale, std::size_t count, std::uint64_t seed) {
  const auto start = Clock::now();
  SuiteResult r;
  r.tolerance = 1e-8;
  r.expect_violations = mu_scale > 1.0;
  const GaugeOracle o(StructuredSet::pnorm_ball(1.5, Vec::Zero(2)), Vec::Zero(2));
  const GaugeEval ev = o.eval(Vec::Ones(2));
  const LocalStructure ls = local_structure(o, ev);
  const ConverseCertificate cert = converse_certificate(ev, o.center(), mu_scale * ls.mu_local, kInf);
  if (!cert.outer) throw Error(ErrorCode::invalid_argument, "no outer certificate");
  r.report = containment_sample(CertificateKind::outer, *cert.outer, o.set(), *ev.boundary_point,
                                0.1, count, seed);
  r.report.name = "pnorm1.5_outer_certificate_x" + std::to_string(mu_scale).substr(0, 3);
  return finish(std::move(r), start);
}

namespace controls {

double sign_flipped_radical_gauge(const GaugeOracle& oracle, const Vec& y) {
  Mat A;
  Vec b;
  double tau;
  if (const auto* ball = oracle.set().get_if<Ball>()) {
    A = Mat::Identity(y.size(), y.size());
    b = ball->c;
    tau = ball->r;
  } else if (const auto* E = oracle.set().get_if<PNormEllipsoid>()) {
    A = E->A();
    b = E->b();
    tau = E->tau();
  } else {
    throw Error(ErrorCode::unsupported, "control needs a 2-norm set");
  }
  // |t v - bh| = 1 in t = 1 / gauge, taking the smaller root.
  const Vec v = A * (y - oracle.center()) / tau;
  const Vec bh = (b - A * oracle.center()) / tau;
  const double vv = v.squaredNorm(), w = v.dot(bh);
  const double disc = w * w - vv * (bh.squaredNorm() - 1.0);
  return vv / (w - std::sqrt(disc));
}

Vec swapped_weight_gen_grad(const Linearization& lin, double alpha) {
  const Vec& a1 = lin.a[0];
  const Vec& a2 = lin.a[1];
  const Vec diff = a1 - a2;
  double theta = ((lin.h[0] - lin.h[1]) / alpha - a2.dot(diff)) / diff.squaredNorm();
  theta = std::clamp(theta, 0.0, 1.0);
  return lin.y - alpha * ((1.0 - theta) * a1 + theta * a2);
}

}  // namespace controls

std::vector<SuiteResult> run_all_suites(std::size_t cases, std::uint64_t seed) {
  std::vector<SuiteResult> out;
  for (GaugeFamily f : {GaugeFamily::halfspace, GaugeFamily::euclidean, GaugeFamily::quartic,
                        GaugeFamily::general_p})
    out.push_back(gauge_agreement_suite(f, cases, seed + static_cast<std::uint64_t>(f)));
  out.push_back(gen_grad_suite(cases, seed + 10));
  out.push_back(level_proj_suite(cases, seed + 11));
  out.push_back(hessian_fd_suite(cases, seed + 12));
  out.push_back(hessian_eigen_suite(cases, seed + 13));
  out.push_back(rank2_eigen_suite(cases, seed + 14));
  out.push_back(witness_eigen_suite(cases, seed + 15));
  // violations of an inflated certificate are rare near the contact point, so
  // the sampling suites get a floor that does not depend on `cases`
  const std::size_t draws = std::max<std::size_t>(cases, 20000);
  out.push_back(pnorm_certificate_suite(1.0, draws, seed + 16));

  SuiteResult flipped = gauge_agreement_suite(GaugeFamily::euclidean, cases, seed + 1,
                                              controls::sign_flipped_radical_gauge);
  flipped.report.name = "control_sign_flipped_radical";
  out.push_back(std::move(flipped));
  SuiteResult swapped = gen_grad_suite(cases, seed + 10, controls::swapped_weight_gen_grad);
  swapped.report.name = "control_swapped_gen_grad_weight";
  out.push_back(std::move(swapped));
  SuiteResult inflated = pnorm_certificate_suite(2.0, draws, seed + 16);
  inflated.report.name = "control_inflated_mu_certificate";
  out.push_back(std::move(inflated));
  return out;
}

}  // namespace gaugeopt::verify
