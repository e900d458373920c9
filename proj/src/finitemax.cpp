#include "gaugeopt/finitemax.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace gaugeopt {

FiniteMaxProblem::FiniteMaxProblem(std::size_t dimension, std::vector<ComponentFunction> components,
                                   std::optional<double> p_star_hint)
    : n_(dimension), components_(std::move(components)), p_star_(p_star_hint) {
  if (components_.empty()) throw Error(ErrorCode::invalid_argument, "need at least one component");
  for (const auto& c : components_) {
    if (!c.evaluate) throw Error(ErrorCode::invalid_argument, "component without evaluator");
    M_ = std::max(M_, c.M);
    mu_ = std::min(mu_, c.mu);
    L_ = std::max(L_, c.L);
  }
}

void FiniteMaxProblem::set_constants(double M, double mu, double L) {
  M_ = M;
  mu_ = mu;
  L_ = L;
}

MaxEvaluation FiniteMaxProblem::evaluate(const Vec& y) const {
  if (static_cast<std::size_t>(y.size()) != n_)
    throw Error(ErrorCode::dimension_mismatch, "finite max argument");
  MaxEvaluation out;
  out.values.reserve(components_.size());
  out.half_sq_subgrads.reserve(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    ComponentValue cv = components_[i].evaluate(y);
    if (i == 0 || cv.value > out.value) {
      out.value = cv.value;
      out.argmax = i;
    }
    out.values.push_back(cv.value);
    out.half_sq_subgrads.push_back(std::move(cv.half_sq_subgrad));
  }
  return out;
}

double FiniteMaxProblem::value(const Vec& y) const {
  double v = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const double fi = components_[i].evaluate(y).value;
    if (i == 0 || fi > v) v = fi;
  }
  return v;
}

ComponentFunction gauge_component(const GaugeOracle& oracle, std::string name) {
  return gauge_component(oracle, exact_structure(oracle), std::move(name));
}

ComponentFunction gauge_component(const GaugeOracle& oracle, const GaugeStructure& gs,
                                  std::string name) {
  ComponentFunction c;
  c.name = std::move(name);
  c.evaluate = [oracle](const Vec& y) {
    GaugeEval ev = oracle.eval(y);
    return ComponentValue{ev.value, std::move(ev.half_sq_subgrad)};
  };
  c.M = oracle.lipschitz_M();
  c.mu = gs.mu;
  c.L = gs.L;
  return c;
}

FiniteMaxProblem feasibility_problem(const std::vector<GaugeOracle>& oracles,
                                     ConstantPolicy policy) {
  if (oracles.empty()) throw Error(ErrorCode::invalid_argument, "no sets");
  const std::size_t n = oracles.front().dimension();
  std::vector<ComponentFunction> comps;
  for (std::size_t i = 0; i < oracles.size(); ++i) {
    if (oracles[i].dimension() != n) throw Error(ErrorCode::dimension_mismatch, "set dimensions");
    const GaugeStructure gs = policy == ConstantPolicy::sampled ? sampled_structure(oracles[i])
                                                                : exact_structure(oracles[i]);
    comps.push_back(gauge_component(oracles[i], gs, "gauge" + std::to_string(i)));
  }
  return FiniteMaxProblem(n, std::move(comps));
}

QuadraticObjective::QuadraticObjective(Mat Q_, Vec c_) : Q(std::move(Q_)), c(std::move(c_)) {
  if (Q.rows() != Q.cols() || Q.rows() != c.size())
    throw Error(ErrorCode::dimension_mismatch, "quadratic objective");
  if (!Q.allFinite() || !c.allFinite()) throw Error(ErrorCode::non_finite, "quadratic objective");
  const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error(ErrorCode::invalid_argument, "Q must be symmetric");
}

double QuadraticObjective::operator()(const Vec& x) const {
  return 1.0 - 0.5 * x.dot(Q * x) - c.dot(x);
}

RadialValue radial_quadratic(const QuadraticObjective& q, const Vec& y) {
  const Vec Qy = q.Q * y;
  const double w = q.c.dot(y) + 1.0;
  const double root = std::sqrt(std::max(0.0, w * w + 2.0 * y.dot(Qy)));
  RadialValue out;
  // (w + root) / 2 loses digits when w << 0; use the conjugate form there
  out.value = w >= 0.0 ? 0.5 * (w + root) : (root > 0.0 ? -y.dot(Qy) / (w - root) : 0.0);
  if (root > 0.0) {
    const Vec grad = 0.5 * (q.c + (w * q.c + 2.0 * Qy) / root);
    out.gradient_of_half_sq = out.value * grad;
  } else {
    out.gradient_of_half_sq = Vec::Zero(y.size());
  }
  return out;
}

FiniteMaxProblem radial_dual_problem(const QuadraticObjective& q, const GaugeOracle& constraint,
                                     const RadialOptions& opts) {
  const auto n = static_cast<Eigen::Index>(constraint.dimension());
  if (q.c.size() != n) throw Error(ErrorCode::dimension_mismatch, "objective vs constraint");
  if (constraint.center().norm() != 0.0)
    throw Error(ErrorCode::not_interior, "radial dual needs the constraint centered at 0");

  // Curvature of F^2 / 2 sampled from central differences of its gradient.
  Rng rng(opts.seed);
  double M = 0.0, mu = kInf, L = 0.0;
  const double h = 1e-5;
  for (std::size_t k = 0; k < opts.samples; ++k) {
    const double rad = opts.sample_radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
    const Vec y = rad * rng.unit_vec(n);
    const RadialValue rv = radial_quadratic(q, y);
    if (rv.value > 0.0) M = std::max(M, rv.gradient_of_half_sq.norm() / rv.value);
    Mat H(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      Vec yp = y, ym = y;
      yp[j] += h;
      ym[j] -= h;
      H.col(j) = (radial_quadratic(q, yp).gradient_of_half_sq -
                  radial_quadratic(q, ym).gradient_of_half_sq) / (2.0 * h);
    }
    Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (H + H.transpose()), Eigen::EigenvaluesOnly);
    mu = std::min(mu, std::max(0.0, eig.eigenvalues().minCoeff()));
    L = std::max(L, eig.eigenvalues().maxCoeff());
  }

  ComponentFunction fg;
  fg.name = "radial_objective";
  fg.evaluate = [q](const Vec& y) {
    RadialValue rv = radial_quadratic(q, y);
    return ComponentValue{rv.value, std::move(rv.gradient_of_half_sq)};
  };
  fg.M = opts.M.value_or(M);
  fg.mu = opts.mu.value_or(mu);
  fg.L = opts.L.value_or(L);

  std::vector<ComponentFunction> comps{std::move(fg), gauge_component(constraint, "constraint")};
  return FiniteMaxProblem(static_cast<std::size_t>(n), std::move(comps));
}

PrimalPoint recover_primal(const FiniteMaxProblem& problem, const Vec& y) {
  const double F = problem.value(y);
  if (!(F > 0.0)) throw Error(ErrorCode::invalid_argument, "dual objective must be positive");
  return {y / F, 1.0 / F};
}

namespace {

template <class Visit>
Vec cgls(const Mat& A, const Vec& b, int iterations, Visit&& visit) {
  Vec x = Vec::Zero(A.cols());
  Vec r = b;
  Vec s = A.transpose() * r;
  Vec p = s;
  double gamma = s.squaredNorm();
  visit(r);
  for (int k = 0; k < iterations; ++k) {
    if (gamma == 0.0) {
      visit(r);
      continue;
    }
    const Vec q = A * p;
    const double qq = q.squaredNorm();
    if (qq == 0.0) {
      visit(r);
      continue;
    }
    const double alpha = gamma / qq;
    x += alpha * p;
    r -= alpha * q;
    s = A.transpose() * r;
    const double gamma_new = s.squaredNorm();
    p = s + (gamma_new / gamma) * p;
    gamma = gamma_new;
    visit(r);
  }
  return x;
}

}  // namespace

Vec recenter(const Mat& A, const Vec& b, int iterations) {
  if (A.rows() != b.size()) throw Error(ErrorCode::dimension_mismatch, "recenter");
  return cgls(A, b, iterations, [](const Vec&) {});
}

std::vector<double> recenter_residuals(const Mat& A, const Vec& b, int iterations) {
  if (A.rows() != b.size()) throw Error(ErrorCode::dimension_mismatch, "recenter");
  std::vector<double> out;
  cgls(A, b, iterations, [&](const Vec& r) { out.push_back(r.norm()); });
  return out;
}

Vec repair_center(const StructuredSet& set, const Vec& e) {
  detail::require_dimension(set, e);
  auto interior = [&](const Vec& x) {
    const DefiningValue v = defining_value(set, x);
    return v.lhs < v.rhs;
  };
  if (interior(e)) return e;
  const Vec deep = std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Halfspace>) return Vec::Zero(e.size());
        else if constexpr (std::is_same_v<T, PNormBall>) return s.offset;
        else if constexpr (std::is_same_v<T, PNormEllipsoid>)
          return s.A().completeOrthogonalDecomposition().solve(s.b());
        else return s.c;
      },
      set.variant());
  double t = 0.5;
  for (int k = 0; k < 50; ++k, t *= 0.5) {
    const Vec cand = t * e + (1.0 - t) * deep;
    if (interior(cand)) return cand;
  }
  if (interior(deep)) return deep;
  throw Error(ErrorCode::not_interior, "could not repair center");
}

}  // namespace gaugeopt
