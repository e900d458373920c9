#include "gaugeopt/steps.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

namespace gaugeopt {

double Linearization::model(const Vec& z) const {
  const Vec d = z - y;
  double best = -kInf;
  for (std::size_t i = 0; i < h.size(); ++i) best = std::max(best, h[i] + a[i].dot(d));
  return best;
}

Linearization linearize(const FiniteMaxProblem& problem, const Vec& y) {
  MaxEvaluation ev = problem.evaluate(y);
  Linearization lin;
  lin.y = y;
  lin.f = ev.values;
  lin.a = std::move(ev.half_sq_subgrads);
  lin.argmax = ev.argmax;
  lin.h.reserve(lin.f.size());
  for (double fi : lin.f) lin.h.push_back(0.5 * fi * fi);
  return lin;
}

namespace {

void require_positive(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::invalid_argument, what);
}

StepResult single(const Linearization&, std::size_t i, Vec z) {
  StepResult r;
  r.next_point = std::move(z);
  r.active_components = {i};
  r.multipliers = {1.0};
  return r;
}

// Dual of the prox-linear subproblem restricted to a support: weights lam on
// the support with common model value nu. Returns false if singular.
bool solve_gen_grad_support(const Linearization& lin, const std::vector<std::size_t>& sup,
                            double alpha, std::vector<double>& lam) {
  const auto k = static_cast<Eigen::Index>(sup.size());
  Mat K = Mat::Zero(k + 1, k + 1);
  Vec rhs(k + 1);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) K(i, j) = alpha * lin.a[sup[i]].dot(lin.a[sup[j]]);
    K(i, k) = 1.0;
    K(k, i) = 1.0;
    rhs[i] = lin.h[sup[i]];
  }
  rhs[k] = 1.0;
  Eigen::ColPivHouseholderQR<Mat> qr(K);
  if (qr.rank() < k + 1) return false;
  const Vec sol = qr.solve(rhs);
  lam.assign(sol.data(), sol.data() + k);
  return sol.allFinite();
}

std::vector<std::vector<std::size_t>> supports(std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::size_t{1} << i)) s.push_back(i);
    out.push_back(std::move(s));
  }
  // small supports first so degenerate ties resolve to the sparsest answer
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& x, const auto& y) { return x.size() < y.size(); });
  return out;
}

StepResult gen_grad_general(const Linearization& lin, double alpha) {
  const std::size_t m = lin.size();
  if (m > kMaxEnumeratedComponents)
    throw Error(ErrorCode::unsupported, "too many components for support enumeration");
  const double scale = 1.0 + *std::max_element(lin.h.begin(), lin.h.end());
  for (const auto& sup : supports(m)) {
    std::vector<double> lam;
    if (!solve_gen_grad_support(lin, sup, alpha, lam)) continue;
    if (std::any_of(lam.begin(), lam.end(), [](double l) { return l < -1e-12; })) continue;
    Vec dir = Vec::Zero(lin.y.size());
    for (std::size_t i = 0; i < sup.size(); ++i) dir += std::max(lam[i], 0.0) * lin.a[sup[i]];
    const Vec z = lin.y - alpha * dir;
    const double nu = lin.model(z);
    bool ok = true;
    for (std::size_t i : sup)
      if (lin.h[i] + lin.a[i].dot(z - lin.y) < nu - 1e-10 * scale) ok = false;
    if (!ok) continue;
    StepResult r;
    r.next_point = z;
    r.active_components = sup;
    double total = 0.0;
    for (double& l : lam) total += (l = std::max(l, 0.0));
    for (double& l : lam) l /= total;
    r.multipliers = lam;
    return r;
  }
  throw Error(ErrorCode::no_convergence, "no KKT support found");
}

}  // namespace

StepResult subgrad_step(const FiniteMaxProblem& problem, const Vec& y, double alpha) {
  require_positive(alpha, "step size must be nonnegative");
  const Linearization lin = linearize(problem, y);
  const std::size_t i = lin.argmax;
  StepResult r = single(lin, i, y - alpha * lin.a[i]);
  r.step_size = alpha;
  r.model_decrease = lin.h[i] - lin.model(r.next_point);
  return r;
}

StepResult gen_grad_step(const Linearization& lin, double alpha) {
  require_positive(alpha, "step size must be nonnegative");
  const Vec& y = lin.y;
  StepResult r;
  if (lin.size() == 1) {
    r = single(lin, 0, y - alpha * lin.a[0]);
  } else if (lin.size() == 2) {
    const Vec& a1 = lin.a[0];
    const Vec& a2 = lin.a[1];
    const Vec y1 = y - alpha * a1;
    const Vec y2 = y - alpha * a2;
    // model_i(z) = h_i + a_i^T (z - y)
    const double m1_at1 = lin.h[0] - alpha * a1.dot(a1), m2_at1 = lin.h[1] - alpha * a2.dot(a1);
    const double m1_at2 = lin.h[0] - alpha * a1.dot(a2), m2_at2 = lin.h[1] - alpha * a2.dot(a2);
    if (m1_at1 >= m2_at1) {
      r = single(lin, 0, y1);
    } else if (m2_at2 >= m1_at2) {
      r = single(lin, 1, y2);
    } else {
      const Vec d = a1 - a2;
      const double dd = d.squaredNorm();
      if (dd == 0.0) {
        r = single(lin, 0, y1);
      } else {
        // weight on component 1, from stationarity of the dual in theta
        double theta = ((lin.h[0] - lin.h[1]) / alpha - a2.dot(d)) / dd;
        theta = std::clamp(theta, 0.0, 1.0);
        r.next_point = y - alpha * (theta * a1 + (1.0 - theta) * a2);
        r.active_components = {0, 1};
        r.multipliers = {theta, 1.0 - theta};
      }
    }
  } else {
    r = gen_grad_general(lin, alpha);
  }
  r.step_size = alpha;
  const Vec d = r.next_point - y;
  r.model_decrease = lin.h[lin.argmax] - (lin.model(r.next_point) + d.squaredNorm() / (2.0 * alpha));
  return r;
}

StepResult gen_grad_step(const FiniteMaxProblem& problem, const Vec& y, double alpha) {
  return gen_grad_step(linearize(problem, y), alpha);
}

namespace {

StepResult level_general(const Linearization& lin, const std::vector<double>& c) {
  const std::size_t m = lin.size();
  if (m > kMaxEnumeratedComponents)
    throw Error(ErrorCode::unsupported, "too many components for support enumeration");
  double best_dist = kInf;
  StepResult best;
  for (const auto& sup : supports(m)) {
    const auto k = static_cast<Eigen::Index>(sup.size());
    Mat G(k, k);
    Vec rhs(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) G(i, j) = lin.a[sup[i]].dot(lin.a[sup[j]]);
      rhs[i] = c[sup[i]];
    }
    Eigen::ColPivHouseholderQR<Mat> qr(G);
    if (qr.rank() < k) continue;
    const Vec lam = qr.solve(rhs);
    if ((lam.array() < -1e-12).any()) continue;
    Vec dir = Vec::Zero(lin.y.size());
    for (Eigen::Index i = 0; i < k; ++i) dir += std::max(lam[i], 0.0) * lin.a[sup[i]];
    bool ok = true;
    for (std::size_t i = 0; i < m; ++i)
      if (c[i] - lin.a[i].dot(dir) > 1e-10 * (1.0 + std::abs(c[i]))) ok = false;
    if (!ok || dir.norm() >= best_dist) continue;
    best_dist = dir.norm();
    best.next_point = lin.y - dir;
    best.active_components = sup;
    best.multipliers.assign(lam.data(), lam.data() + k);
  }
  if (!std::isfinite(best_dist)) throw Error(ErrorCode::empty_level_set, "linearized level set");
  return best;
}

}  // namespace

StepResult level_proj_step(const Linearization& lin, double f_bar) {
  if (!(f_bar > 0.0)) throw Error(ErrorCode::invalid_argument, "target level must be positive");
  const double target = 0.5 * f_bar * f_bar;
  std::vector<double> c(lin.size());
  for (std::size_t i = 0; i < lin.size(); ++i) c[i] = lin.h[i] - target;
  const Vec& y = lin.y;

  StepResult r;
  if (std::all_of(c.begin(), c.end(), [](double v) { return v <= 0.0; })) {
    r.next_point = y;
  } else if (lin.size() == 1) {
    const double aa = lin.a[0].squaredNorm();
    if (aa == 0.0) throw Error(ErrorCode::empty_level_set, "zero subgradient above target");
    r = single(lin, 0, y - (c[0] / aa) * lin.a[0]);
    r.multipliers = {c[0] / aa};
  } else if (lin.size() == 2) {
    const Vec& a1 = lin.a[0];
    const Vec& a2 = lin.a[1];
    const double g11 = a1.squaredNorm(), g22 = a2.squaredNorm(), g12 = a1.dot(a2);
    const double tol1 = 1e-12 * (1.0 + std::abs(c[0])), tol2 = 1e-12 * (1.0 + std::abs(c[1]));
    // single-constraint projections, kept when they satisfy the other constraint
    const double l1 = (c[0] > 0.0 && g11 > 0.0) ? c[0] / g11 : 0.0;
    const double l2 = (c[1] > 0.0 && g22 > 0.0) ? c[1] / g22 : 0.0;
    const bool ok1 = c[0] > 0.0 && g11 > 0.0 && c[1] - l1 * g12 <= tol2;
    const bool ok2 = c[1] > 0.0 && g22 > 0.0 && c[0] - l2 * g12 <= tol1;
    if (ok1) {
      r = single(lin, 0, y - l1 * a1);
      r.multipliers = {l1};
    } else if (ok2) {
      r = single(lin, 1, y - l2 * a2);
      r.multipliers = {l2};
    } else {
      const double det = g11 * g22 - g12 * g12;
      if (det <= 1e-14 * g11 * g22) {
        // parallel linearizations: project on the more violated one
        const double d1 = g11 > 0.0 ? c[0] / std::sqrt(g11) : -kInf;
        const double d2 = g22 > 0.0 ? c[1] / std::sqrt(g22) : -kInf;
        const std::size_t i = d1 >= d2 ? 0 : 1;
        const double gi = i == 0 ? g11 : g22;
        if (!(gi > 0.0)) throw Error(ErrorCode::empty_level_set, "zero subgradients above target");
        r = single(lin, i, y - (c[i] / gi) * lin.a[i]);
        r.multipliers = {c[i] / gi};
      } else {
        const double lam1 = (g22 * c[0] - g12 * c[1]) / det;
        const double lam2 = (g11 * c[1] - g12 * c[0]) / det;
        if (lam1 < 0.0 || lam2 < 0.0) {
          // neither single projection works and the pair has a wrong sign:
          // the two halfspaces do not meet
          throw Error(ErrorCode::empty_level_set, "linearized level set");
        }
        r.next_point = y - (lam1 * a1 + lam2 * a2);
        r.active_components = {0, 1};
        r.multipliers = {lam1, lam2};
      }
    }
  } else {
    r = level_general(lin, c);
  }
  // report the Lagrange multipliers as convex weights
  double total = 0.0;
  for (double l : r.multipliers) total += l;
  if (total > 0.0)
    for (double& l : r.multipliers) l /= total;
  r.step_size = (r.next_point - y).norm();
  r.model_decrease = lin.h[lin.argmax] - lin.model(r.next_point);
  return r;
}

StepResult level_proj_step(const FiniteMaxProblem& problem, const Vec& y, double f_bar) {
  return level_proj_step(linearize(problem, y), f_bar);
}

StepResult armijo_gen_grad(const FiniteMaxProblem& problem, const Vec& y, double s_bar, double tau,
                           double c) {
  if (!(s_bar > 0.0) || !(tau > 0.0 && tau < 1.0) || !(c > 0.0))
    throw Error(ErrorCode::invalid_argument, "armijo parameters");
  const Linearization lin = linearize(problem, y);
  const double base = 0.5 * lin.max_f() * lin.max_f();
  double s = s_bar;
  for (int i = 0; i <= 60; ++i, s *= tau) {
    StepResult r = gen_grad_step(lin, s);
    const double fz = problem.value(r.next_point);
    if (0.5 * fz * fz <= base - c * (r.next_point - y).squaredNorm()) return r;
  }
  StepResult r;
  r.next_point = y;
  r.active_components = {lin.argmax};
  r.multipliers = {1.0};
  r.stalled = true;
  return r;
}

}  // namespace gaugeopt
