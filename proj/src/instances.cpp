#include "gaugeopt/instances.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace gaugeopt {

namespace {

nlohmann::json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

nlohmann::json mat_json(const Mat& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) rows.push_back(vec_json(M.row(i).transpose()));
  return rows;
}

Vec generalized_normal_vec(Rng& rng, std::size_t n, double beta) {
  Vec v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.generalized_normal(beta);
  return v;
}

}  // namespace

StructuredSet FeasibilityInstance::set(std::size_t i) const {
  return StructuredSet::pnorm_ellipsoid(A.at(i), b.at(i), p.at(i), tau.at(i));
}

std::vector<GaugeOracle> FeasibilityInstance::oracles() const {
  return {GaugeOracle(set(0), e[0]), GaugeOracle(set(1), e[1])};
}

FiniteMaxProblem FeasibilityInstance::problem(ConstantPolicy policy) const {
  return feasibility_problem(oracles(), policy);
}

double noise_norm_quantile(std::size_t n, double p, std::size_t samples, double level, Rng& rng) {
  if (samples == 0 || !(level > 0.0 && level < 1.0))
    throw Error(ErrorCode::invalid_argument, "quantile needs samples and a level in (0, 1)");
  std::vector<double> norms(samples);
  for (double& v : norms) v = pnorm(generalized_normal_vec(rng, n, p), p);
  std::sort(norms.begin(), norms.end());
  const auto k = static_cast<std::size_t>(std::ceil(level * static_cast<double>(samples)));
  return norms[std::clamp<std::size_t>(k, 1, samples) - 1];
}

FeasibilityInstance generate_feasibility(std::size_t n, double p1, double p2, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "dimension must be at least 2");
  for (double p : {p1, p2})
    if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::invalid_argument, "p must lie in (1, inf)");
  const auto N = static_cast<Eigen::Index>(n);
  FeasibilityInstance inst;
  inst.n = n;
  inst.p = {p1, p2};
  inst.seed = seed;
  Rng rx = Rng::stream(seed, streams::x_true);
  inst.x_true = rx.normal_vec(N);
  const std::uint64_t a_stream[2] = {streams::A1, streams::A2};
  const std::uint64_t eps_stream[2] = {streams::eps1, streams::eps2};
  const std::uint64_t tau_stream[2] = {streams::tau1, streams::tau2};
  for (std::size_t i = 0; i < 2; ++i) {
    Rng ra = Rng::stream(seed, a_stream[i]);
    inst.A[i] = ra.normal_mat(N, N);
    Rng re = Rng::stream(seed, eps_stream[i]);
    inst.b[i] = inst.A[i] * inst.x_true + generalized_normal_vec(re, n, inst.p[i]);
    Rng rt = Rng::stream(seed, tau_stream[i]);
    inst.tau[i] = noise_norm_quantile(n, inst.p[i], 2000, 0.975, rt);
    inst.e[i] = repair_center(inst.set(i), recenter(inst.A[i], inst.b[i], 30));
  }
  return inst;
}

QuadraticObjective TrustRegionInstance::shifted_objective() const {
  return QuadraticObjective(Q, c + Q * e);
}

StructuredSet TrustRegionInstance::shifted_constraint() const {
  return StructuredSet::pnorm_ellipsoid(A, b - A * e, p, 1.0);
}

double TrustRegionInstance::original_objective(const Vec& x) const {
  return 1.0 - 0.5 * x.dot(Q * x) - c.dot(x);
}

double TrustRegionInstance::original_objective_of_shifted(const Vec& x_shifted) const {
  return original_objective(e + x_shifted);
}

TrustRegionInstance generate_trust_region(std::size_t n, std::size_t m, double p, std::uint64_t seed) {
  if (n < 2 || m < 1) throw Error(ErrorCode::invalid_argument, "need n >= 2 and m >= 1");
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::invalid_argument, "p must lie in (1, inf)");
  const auto N = static_cast<Eigen::Index>(n), Mm = static_cast<Eigen::Index>(m);
  TrustRegionInstance inst;
  inst.n = n;
  inst.m = m;
  inst.p = p;
  inst.seed = seed;
  Rng rq = Rng::stream(seed, streams::Q);
  const Mat G = rq.normal_mat(N, N);
  inst.Q = 0.5 * (G + G.transpose());
  // Shift the symmetrized Gaussian matrix up to positive semidefinite.
  Eigen::SelfAdjointEigenSolver<Mat> eig(inst.Q, Eigen::EigenvaluesOnly);
  const double shift = std::max(0.0, -eig.eigenvalues().minCoeff());
  inst.Q.diagonal().array() += shift;
  Rng rc = Rng::stream(seed, streams::c);
  inst.c = rc.normal_vec(N);
  Rng ra = Rng::stream(seed, streams::A);
  inst.A = ra.normal_mat(Mm, N);
  Rng rf = Rng::stream(seed, streams::x_feas);
  inst.x_feas = rf.normal_vec(N);
  Rng re = Rng::stream(seed, streams::eps);
  inst.b = inst.A * inst.x_feas + re.normal_vec(Mm) / static_cast<double>(m);
  const StructuredSet S = StructuredSet::pnorm_ellipsoid(inst.A, inst.b, p, 1.0);
  inst.e = repair_center(S, recenter(inst.A, inst.b, 30));
  return inst;
}

nlohmann::json to_json(const FeasibilityInstance& inst) {
  nlohmann::json j;
  j["n"] = inst.n;
  j["p"] = {inst.p[0], inst.p[1]};
  j["seed"] = inst.seed;
  j["x_true"] = vec_json(inst.x_true);
  j["tau"] = {inst.tau[0], inst.tau[1]};
  for (std::size_t i = 0; i < 2; ++i) {
    j["A"].push_back(mat_json(inst.A[i]));
    j["b"].push_back(vec_json(inst.b[i]));
    j["e"].push_back(vec_json(inst.e[i]));
  }
  return j;
}

nlohmann::json to_json(const TrustRegionInstance& inst) {
  return {{"n", inst.n},       {"m", inst.m},     {"p", inst.p},
          {"seed", inst.seed}, {"Q", mat_json(inst.Q)}, {"c", vec_json(inst.c)},
          {"A", mat_json(inst.A)}, {"b", vec_json(inst.b)}, {"x_feas", vec_json(inst.x_feas)},
          {"e", vec_json(inst.e)}};
}

}  // namespace gaugeopt
