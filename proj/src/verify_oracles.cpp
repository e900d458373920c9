#include <algorithm>
#include <cmath>

#include "gaugeopt/error.hpp"
#include "gaugeopt/verify.hpp"

namespace gaugeopt::verify {

namespace {

nlohmann::json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

void OracleReport::add(double abs_err, double rel_err, const nlohmann::json& input) {
  ++case_count;
  abs_err = std::abs(abs_err);
  rel_err = std::abs(rel_err);
  if (!std::isfinite(abs_err)) abs_err = kInf;
  if (!std::isfinite(rel_err)) rel_err = kInf;
  if (case_count == 1 || rel_err > max_rel_error) worst_case_input = input;
  max_abs_error = std::max(max_abs_error, abs_err);
  max_rel_error = std::max(max_rel_error, rel_err);
}

nlohmann::json to_json(const OracleReport& r) {
  return {{"name", r.name},
          {"case_count", r.case_count},
          {"max_abs_error", r.max_abs_error},
          {"max_rel_error", r.max_rel_error},
          {"violations", r.violations},
          {"worst_case_input", r.worst_case_input}};
}

double gauge_bisection(const StructuredSet& set, const Vec& e, const Vec& y, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  const Vec d = y - e;
  const double nd = d.norm();
  if (nd == 0.0) return 0.0;
  const RadiusBounds rb = radius_bounds(set, e);
  auto member = [&](double lambda) { return contains(set, Vec(e + d / lambda)); };

  // Radius bracket, allowing one relative nudge for rounding on the boundary.
  double hi = nd / rb.inner;
  if (!member(hi)) {
    hi *= 1.0 + 1e-9;
    if (!member(hi)) throw Error(ErrorCode::invalid_bracket, "upper gauge bracket is not a member");
  }
  double lo = std::isfinite(rb.outer) ? nd / rb.outer : 0.0;
  // Unbounded sets: a ray that is still inside at distance 1e150 never leaves.
  if (lo == 0.0 && member(nd * 1e-150)) return 0.0;
  if (lo > 0.0 && member(lo)) {
    lo *= 1.0 - 1e-9;
    if (member(lo)) throw Error(ErrorCode::invalid_bracket, "lower gauge bracket is a member");
  }
  for (int it = 0; it < 4000 && hi - lo > tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (member(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double default_fd_step(const Vec& y) { return 1e-5 * std::max(1.0, y.norm()); }

Vec finite_diff_gradient(const ScalarFn& fn, const Vec& y, double h) {
  Vec g(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    Vec yp = y, ym = y;
    yp[i] += h;
    ym[i] -= h;
    g[i] = (fn(yp) - fn(ym)) / (2.0 * h);
  }
  return g;
}

Mat finite_diff_hessian(const ScalarFn& fn, const Vec& y, double h) {
  const Eigen::Index n = y.size();
  Mat H(n, n);
  const double f0 = fn(y);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec yp = y, ym = y;
    yp[i] += h;
    ym[i] -= h;
    H(i, i) = (fn(yp) - 2.0 * f0 + fn(ym)) / (h * h);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Vec pp = y, pm = y, mp = y, mm = y;
      pp[i] += h; pp[j] += h;
      pm[i] += h; pm[j] -= h;
      mp[i] -= h; mp[j] += h;
      mm[i] -= h; mm[j] -= h;
      H(i, j) = H(j, i) = (fn(pp) - fn(pm) - fn(mp) + fn(mm)) / (4.0 * h * h);
    }
  }
  return 0.5 * (H + H.transpose());
}

Vec symmetric_eigs(const Mat& M) {
  if (M.rows() != M.cols()) throw Error(ErrorCode::dimension_mismatch, "matrix must be square");
  const Eigen::Index n = M.rows();
  const double scale = M.norm();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(M(i, j) - M(j, i)) > 1e-10 * std::max(1.0, scale))
        throw Error(ErrorCode::invalid_argument, "matrix is not symmetric");

  Mat A = 0.5 * (M + M.transpose());
  auto off = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += A(i, j) * A(i, j);
    return std::sqrt(s);
  };
  for (int sweep = 0; sweep < 100 && off() > 1e-14 * scale; ++sweep) {
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (A(p, q) == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = A(i, i);
  std::sort(ev.begin(), ev.end());
  return Eigen::Map<Vec>(ev.data(), n);
}

std::optional<Vec> gauss_solve(Mat A, Vec b) {
  const Eigen::Index n = A.rows();
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, A.row(i).cwiseAbs().sum());
  if (scale == 0.0) return std::nullopt;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    for (Eigen::Index i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(piv, k))) piv = i;
    if (std::abs(A(piv, k)) <= 1e-13 * scale) return std::nullopt;
    A.row(k).swap(A.row(piv));
    std::swap(b[k], b[piv]);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double f = A(i, k) / A(k, k);
      if (f == 0.0) continue;
      for (Eigen::Index j = k; j < n; ++j) A(i, j) -= f * A(k, j);
      b[i] -= f * b[k];
    }
  }
  Vec x(n);
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    double s = b[k];
    for (Eigen::Index j = k + 1; j < n; ++j) s -= A(k, j) * x[j];
    x[k] = s / A(k, k);
  }
  return x;
}

QpSolution small_qp_enumerate(QpKind kind, const std::vector<double>& h, const std::vector<Vec>& a,
                              const Vec& y, double alpha_or_fbar) {
  const std::size_t m = h.size();
  if (m == 0 || m != a.size()) throw Error(ErrorCode::dimension_mismatch, "need matching h and a");
  if (m > 8) throw Error(ErrorCode::unsupported, "enumeration limited to 8 components");
  if (!(alpha_or_fbar > 0.0)) throw Error(ErrorCode::invalid_argument, "parameter must be positive");
  const Eigen::Index n = y.size();
  double hscale = 1.0;
  for (double v : h) hscale = std::max(hscale, std::abs(v));
  const double tol = 1e-10 * hscale;
  const bool prox = kind == QpKind::prox_linear;
  const double alpha = alpha_or_fbar;
  const double level = 0.5 * alpha_or_fbar * alpha_or_fbar;

  std::optional<QpSolution> best;
  double best_obj = kInf;
  auto consider = [&](const std::vector<std::size_t>& S, const Vec& z, const std::vector<double>& lam,
                      double t) {
    for (double l : lam)
      if (l < -1e-10) return;
    const double rhs = prox ? t : level;
    for (std::size_t j = 0; j < m; ++j) {
      if (h[j] + a[j].dot(z - y) > rhs + tol) return;
    }
    const double obj = prox ? t + (z - y).squaredNorm() / (2.0 * alpha) : (z - y).norm();
    if (obj < best_obj) {
      best_obj = obj;
      best = QpSolution{z, S, lam};
    }
  };

  if (!prox) {
    bool all = true;
    for (std::size_t j = 0; j < m; ++j) all = all && h[j] <= level;
    if (all) consider({}, y, {}, 0.0);
  }
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    std::vector<std::size_t> S;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::size_t{1} << i)) S.push_back(i);
    const Eigen::Index k = static_cast<Eigen::Index>(S.size());
    // Unknowns: z (n), lambda_S (k), and t for the prox-linear epigraph.
    const Eigen::Index N = n + k + (prox ? 1 : 0);
    Mat K = Mat::Zero(N, N);
    Vec rhs = Vec::Zero(N);
    for (Eigen::Index r = 0; r < n; ++r) K(r, r) = prox ? 1.0 / alpha : 1.0;
    rhs.head(n) = prox ? Vec(y / alpha) : y;
    for (Eigen::Index s = 0; s < k; ++s) {
      const Vec& ai = a[S[static_cast<std::size_t>(s)]];
      K.block(0, n + s, n, 1) = ai;
      K.block(n + s, 0, 1, n) = ai.transpose();
      const double hi = h[S[static_cast<std::size_t>(s)]];
      if (prox) {
        K(n + s, n + k) = -1.0;
        rhs[n + s] = ai.dot(y) - hi;
      } else {
        rhs[n + s] = ai.dot(y) + level - hi;
      }
    }
    if (prox) {
      for (Eigen::Index s = 0; s < k; ++s) K(n + k, n + s) = 1.0;
      rhs[n + k] = 1.0;
    }
    const std::optional<Vec> sol = gauss_solve(K, rhs);
    if (!sol) continue;
    std::vector<double> lam(static_cast<std::size_t>(k));
    for (Eigen::Index s = 0; s < k; ++s) lam[static_cast<std::size_t>(s)] = (*sol)[n + s];
    consider(S, sol->head(n), lam, prox ? (*sol)[n + k] : 0.0);
  }
  if (!best) {
    if (prox) throw Error(ErrorCode::no_convergence, "no KKT support found");
    throw Error(ErrorCode::empty_level_set, "linearized level set is empty");
  }
  return *best;
}

OracleReport containment_sample(CertificateKind kind, const Ball& certificate,
                                const StructuredSet& set, const Vec& near, double radius,
                                std::size_t count, std::uint64_t seed) {
  if (count == 0) throw Error(ErrorCode::invalid_argument, "count must be positive");
  OracleReport rep;
  rep.name = kind == CertificateKind::outer ? "outer_containment" : "inner_containment";
  Rng rng(seed);
  const Eigen::Index n = near.size();
  for (std::size_t s = 0; s < count; ++s) {
    const double rad = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
    const Vec x = near + rad * rng.unit_vec(n);
    const double to_center = (x - certificate.c).norm() - certificate.r;
    double violation;
    if (kind == CertificateKind::outer) {
      if (!contains(set, x)) continue;
      violation = to_center;
    } else {
      if (to_center > 0.0) continue;
      const DefiningValue dv = defining_value(set, x);
      violation = (dv.lhs - dv.rhs) / std::max(1.0, dv.rhs);
    }
    rep.add(std::max(0.0, violation), std::max(0.0, violation),
            {{"point", vec_json(x)}, {"violation", violation}});
    if (violation > 1e-8) ++rep.violations;
  }
  return rep;
}

}  // namespace gaugeopt::verify
