#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "gaugeopt/error.hpp"
#include "gaugeopt/verify.hpp"

namespace gaugeopt::verify {

namespace {

// |u|_p with its gradient and Hessian.
struct NormDerivs {
  double value;
  Vec grad;
  Mat hess;
};

NormDerivs pnorm_derivs(const Vec& u, double p) {
  const double N = pnorm(u, p);
  NormDerivs d{N, Vec::Zero(u.size()), Mat::Zero(u.size(), u.size())};
  if (N == 0.0) return d;
  const Vec r = u / N;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double a = std::abs(r[j]);
    d.grad[j] = std::copysign(std::pow(a, p - 1.0), r[j]);
    d.hess(j, j) = std::pow(a, p - 2.0);
  }
  d.hess = (p - 1.0) / N * (d.hess - d.grad * d.grad.transpose());
  return d;
}

double phi(const QuadraticObjective& q, const Vec& x) { return 0.5 * x.dot(q.Q * x) + q.c.dot(x); }

}  // namespace

double trust_region_kkt_residual(const QuadraticObjective& q, const PNormEllipsoid& set,
                                 const Vec& x) {
  const Vec gphi = q.Q * x + q.c;
  const Vec u = set.A() * x - set.b();
  const NormDerivs nd = pnorm_derivs(u, set.p());
  const double slack = set.tau() - nd.value;
  const double scale = std::max(1.0, gphi.norm());
  if (slack > 1e-9 * set.tau()) return gphi.norm() / scale;
  const Vec gcon = set.A().transpose() * nd.grad;
  const double nu = -gphi.dot(gcon) / gcon.squaredNorm();
  double res = (gphi + std::max(0.0, nu) * gcon).norm() / scale;
  res = std::max(res, std::abs(slack) / set.tau());
  return std::max(res, std::max(0.0, -nu));
}

ReferenceResult reference_trust_region_p2(const QuadraticObjective& q, const PNormEllipsoid& set) {
  if (set.p() != 2.0) throw Error(ErrorCode::unsupported, "multiplier root finding needs p = 2");
  const Mat AtA = set.A().transpose() * set.A();
  const Vec Atb = set.A().transpose() * set.b();
  const double tau2 = set.tau() * set.tau();
  ReferenceResult out;

  // x(nu) solves (Q + nu A^T A) x = -c + nu A^T b; |A x(nu) - b| decreases in nu.
  auto solve = [&](double nu, Vec& x) {
    Eigen::LDLT<Mat> ldlt(q.Q + nu * AtA);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
    x = ldlt.solve(-q.c + nu * Atb);
    return x.allFinite();
  };
  auto excess = [&](const Vec& x) { return (set.A() * x - set.b()).squaredNorm() - tau2; };

  Vec x;
  Eigen::SelfAdjointEigenSolver<Mat> qe(q.Q, Eigen::EigenvaluesOnly);
  const bool q_definite = qe.eigenvalues().minCoeff() > 1e-10 * std::max(1.0, qe.eigenvalues().maxCoeff());
  if (q_definite && solve(0.0, x) && excess(x) <= 0.0) {
    out.x = x;
  } else {
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < 200; ++k, hi *= 2.0) {
      if (solve(hi, x) && excess(x) <= 0.0) break;
      lo = hi;
    }
    for (int it = 0; it < 300; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      ++out.iterations;
      if (solve(mid, x) && excess(x) <= 0.0) hi = mid;
      else lo = mid;
    }
    if (!solve(hi, x)) throw Error(ErrorCode::no_convergence, "multiplier system is singular");
    out.x = x;
  }
  out.value = 1.0 - phi(q, out.x);
  out.accuracy = trust_region_kkt_residual(q, set, out.x);
  return out;
}

ReferenceResult reference_trust_region_barrier(const QuadraticObjective& q, const PNormEllipsoid& set) {
  const double p = set.p();
  const double taup = std::pow(set.tau(), p);
  const Mat& A = set.A();
  const Eigen::Index n = A.cols();
  Vec x = Vec::Zero(n);
  auto slack = [&](const Vec& z) {
    double s = 0.0;
    const Vec u = A * z - set.b();
    for (Eigen::Index j = 0; j < u.size(); ++j) s += std::pow(std::abs(u[j]), p);
    return taup - s;
  };
  if (!(slack(x) > 0.0)) throw Error(ErrorCode::not_interior, "barrier start must be strictly feasible");

  ReferenceResult out;
  double s = 1.0;
  for (int stage = 0; stage < 60; ++stage) {
    auto barrier = [&](const Vec& z) {
      const double g = slack(z);
      return g > 0.0 ? s * phi(q, z) - std::log(g) : kInf;
    };
    for (int it = 0; it < 200; ++it) {
      const Vec u = A * x - set.b();
      Vec dg(u.size()), d2g(u.size());
      for (Eigen::Index j = 0; j < u.size(); ++j) {
        const double a = std::abs(u[j]);
        dg[j] = p * std::copysign(std::pow(a, p - 1.0), u[j]);
        d2g[j] = p * (p - 1.0) * std::pow(a, p - 2.0);
      }
      const double g = slack(x);
      const Vec grad_g = A.transpose() * dg;  // gradient of sum |u|^p
      const Vec grad = s * (q.Q * x + q.c) + grad_g / g;
      const Mat H = s * q.Q + A.transpose() * d2g.asDiagonal() * A / g +
                    grad_g * grad_g.transpose() / (g * g);
      Eigen::LDLT<Mat> ldlt(H);
      const Vec dx = -ldlt.solve(grad);
      const double decrement = -grad.dot(dx);
      ++out.iterations;
      if (!(decrement > 1e-14)) break;
      double step = 1.0;
      const double f0 = barrier(x);
      while (step > 1e-20 && !(barrier(x + step * dx) <= f0 - 0.25 * step * decrement)) step *= 0.5;
      if (step <= 1e-20) break;
      x += step * dx;
    }
    const double gap = 1.0 / s;
    if (gap <= 1e-13 * std::max(1.0, std::abs(phi(q, x)))) {
      out.accuracy = gap;
      break;
    }
    s *= 10.0;
    out.accuracy = gap;
  }
  out.x = x;
  out.value = 1.0 - phi(q, x);
  return out;
}

ReferenceResult reference_min_max_gauge(const std::vector<GaugeOracle>& oracles, const Vec& y0) {
  struct Piece {
    Mat B;  // [A, -r] acting on (y, t)
    Vec shift;  // -A e
    double p, tau;
  };
  if (oracles.empty()) throw Error(ErrorCode::invalid_argument, "need at least one gauge");
  const Eigen::Index n = y0.size();
  std::vector<Piece> pieces;
  for (const GaugeOracle& o : oracles) {
    const auto* E = o.set().get_if<PNormEllipsoid>();
    if (!E) throw Error(ErrorCode::unsupported, "epigraph reference needs p-norm ellipsoids");
    const Vec& e = o.center();
    Piece pc;
    pc.B.resize(E->A().rows(), n + 1);
    pc.B.leftCols(n) = E->A();
    pc.B.col(n) = -(E->b() - E->A() * e);
    pc.shift = -E->A() * e;
    pc.p = E->p();
    pc.tau = E->tau();
    pieces.push_back(std::move(pc));
  }
  auto slack = [&](const Piece& pc, const Vec& z) {
    return z[n] * pc.tau - pnorm(Vec(pc.B * z + pc.shift), pc.p);
  };
  auto feasible = [&](const Vec& z) {
    if (!(z[n] > 0.0)) return false;
    for (const Piece& pc : pieces)
      if (!(slack(pc, z) > 0.0)) return false;
    return true;
  };

  Vec z(n + 1);
  z.head(n) = y0;
  z[n] = 1.0;
  for (int k = 0; k < 200 && !feasible(z); ++k) z[n] *= 2.0;
  if (!feasible(z)) throw Error(ErrorCode::no_convergence, "no strictly feasible epigraph start");

  ReferenceResult out;
  const double m = static_cast<double>(pieces.size());
  double s = 1.0;
  for (int stage = 0; stage < 80; ++stage) {
    auto barrier = [&](const Vec& w) {
      if (!feasible(w)) return kInf;
      double v = s * w[n];
      for (const Piece& pc : pieces) v -= std::log(slack(pc, w));
      return v;
    };
    double prev_decrement = kInf;
    for (int it = 0; it < 300; ++it) {
      Vec grad = Vec::Zero(n + 1);
      Mat H = Mat::Zero(n + 1, n + 1);
      grad[n] = s;
      for (const Piece& pc : pieces) {
        const NormDerivs nd = pnorm_derivs(Vec(pc.B * z + pc.shift), pc.p);
        const double g = z[n] * pc.tau - nd.value;
        Vec dg = -(pc.B.transpose() * nd.grad);
        dg[n] += pc.tau;
        grad -= dg / g;
        H += dg * dg.transpose() / (g * g) + pc.B.transpose() * nd.hess * pc.B / g;
      }
      Eigen::LDLT<Mat> ldlt(H);
      const Vec dz = -ldlt.solve(grad);
      const double decrement = -grad.dot(dz);
      ++out.iterations;
      // squared Newton decrement. Near the end the gradient is dominated by
      // roundoff of s * t, so also stop once it no longer shrinks quadratically.
      if (!(decrement > 1e-9) || !dz.allFinite()) break;
      if (decrement < 1e-3 && decrement > 0.25 * prev_decrement) break;
      prev_decrement = decrement;
      double step = 1.0;
      if (decrement < 0.1) {
        // quadratic region: the barrier value is mostly roundoff at large s,
        // so only keep the step strictly feasible
        while (step > 1e-20 && !feasible(z + step * dz)) step *= 0.5;
      } else {
        const double f0 = barrier(z);
        while (step > 1e-20 && !(barrier(z + step * dz) <= f0 - 0.25 * step * decrement)) step *= 0.5;
      }
      if (step <= 1e-20) break;
      z += step * dz;
    }
    out.accuracy = m / s;
    if (out.accuracy <= 1e-14 * std::max(1.0, z[n])) break;
    s *= 8.0;
  }
  out.x = z.head(n);
  out.value = z[n];
  return out;
}

ReferenceResult reference_solve(const FeasibilityInstance& inst) {
  return reference_min_max_gauge(inst.oracles(), inst.e[0]);
}

ReferenceResult reference_solve(const TrustRegionInstance& inst) {
  const QuadraticObjective q = inst.shifted_objective();
  const StructuredSet S = inst.shifted_constraint();
  const auto& E = *S.get_if<PNormEllipsoid>();
  return inst.p == 2.0 ? reference_trust_region_p2(q, E) : reference_trust_region_barrier(q, E);
}

}  // namespace gaugeopt::verify
