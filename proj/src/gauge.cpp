#include "gaugeopt/gauge.hpp"

#include <algorithm>
#include <cmath>

namespace gaugeopt {

namespace {

// Positive root of (1 - |bh|^2) lam^2 + 2 (v^T bh) lam - |v|^2 = 0, i.e. the
// lam with ||v / lam - bh||_2 = 1. Requires |bh| < 1.
double quadratic_gauge(const Vec& v, const Vec& bh) {
  const double vv = v.squaredNorm();
  if (vv == 0.0) return 0.0;
  const double w = v.dot(bh);
  const double a = 1.0 - bh.squaredNorm();
  const double root = std::sqrt(w * w + a * vv);
  if (w >= 0.0) return vv / (w + root);
  return (root - w) / a;
}

// Q(t) = sum_i |t v_i - bh_i|^p - 1 is convex in t with Q(0) < 0, so Newton
// started right of the root decreases monotonically onto it.
class PowerRay {
 public:
  PowerRay(const Vec& v, const Vec& bh, double p) : v_(v), bh_(bh), p_(p) {
    if (p_ == 4.0) {
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = v[i], b = bh[i];
        c4_ += a * a * a * a;
        c3_ -= 4.0 * a * a * a * b;
        c2_ += 6.0 * a * a * b * b;
        c1_ -= 4.0 * a * b * b * b;
        c0_ += b * b * b * b;
      }
      c0_ -= 1.0;
    }
  }

  void eval(double t, double& q, double& dq) const {
    if (p_ == 4.0) {
      q = (((c4_ * t + c3_) * t + c2_) * t + c1_) * t + c0_;
      dq = ((4.0 * c4_ * t + 3.0 * c3_) * t + 2.0 * c2_) * t + c1_;
      return;
    }
    q = -1.0;
    dq = 0.0;
    for (Eigen::Index i = 0; i < v_.size(); ++i) {
      const double r = t * v_[i] - bh_[i];
      const double ar = std::abs(r);
      const double pw = std::pow(ar, p_ - 1.0);
      q += pw * ar;
      dq += p_ * std::copysign(pw, r) * v_[i];
    }
  }

 private:
  const Vec& v_;
  const Vec& bh_;
  double p_;
  double c4_ = 0, c3_ = 0, c2_ = 0, c1_ = 0, c0_ = 0;
};

double power_gauge(const Vec& v, const Vec& bh, double p) {
  const double nv = pnorm(v, p);
  if (nv == 0.0) return 0.0;
  const double nb = pnorm(bh, p);
  double lo = (1.0 - nb) / nv;
  double hi = (1.0 + nb) / nv;
  const PowerRay ray(v, bh, p);

  double t = hi;
  bool ok = false;
  for (int it = 0; it < 200; ++it) {
    double q, dq;
    ray.eval(t, q, dq);
    if (q <= 0.0) {  // landed on (or a rounding step past) the root
      ok = true;
      break;
    }
    if (!(dq > 0.0)) break;
    const double next = t - q / dq;
    if (!std::isfinite(next) || next < lo * (1.0 - 1e-12)) break;
    if (t - next <= 1e-15 * t) {
      t = next;
      ok = true;
      break;
    }
    t = next;
  }
  if (!ok) {
    // bisection fallback on the radius bracket
    for (int it = 0; it < 400 && hi - lo > 1e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      double q, dq;
      ray.eval(mid, q, dq);
      (q > 0.0 ? hi : lo) = mid;
    }
    t = 0.5 * (lo + hi);
  }
  return 1.0 / t;
}

// Membership bisection along the ray for sets without a closed form.
double generic_gauge(const StructuredSet& set, const Vec& e, const Vec& d, double R, double D) {
  const double nd = d.norm();
  double lo = R / nd;
  double hi = std::isfinite(D) ? D / nd : 2.0 * lo;
  auto exits = [&](double t) {
    const DefiningValue v = defining_value(set, e + t * d);
    return v.lhs > v.rhs;
  };
  while (!exits(hi)) {
    hi *= 2.0;
    if (!std::isfinite(hi)) return 0.0;
  }
  for (int it = 0; it < 400 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (exits(mid) ? hi : lo) = mid;
  }
  return 1.0 / (0.5 * (lo + hi));
}

}  // namespace

GaugeOracle::GaugeOracle(StructuredSet set, Vec e) : set_(std::move(set)), e_(std::move(e)) {
  detail::require_dimension(set_, e_);
  if (!e_.allFinite()) throw Error(ErrorCode::non_finite, "gauge center");
  const DefiningValue dv = defining_value(set_, e_);
  if (!(dv.lhs < dv.rhs)) throw Error(ErrorCode::not_interior, "gauge center");
  const RadiusBounds rb = radius_bounds(set_, e_);
  R_ = rb.inner;
  D_ = rb.outer;
}

double GaugeOracle::value(const Vec& y) const {
  detail::require_dimension(set_, y);
  if (!y.allFinite()) throw Error(ErrorCode::non_finite, "gauge argument");
  const Vec d = y - e_;
  if (d.squaredNorm() == 0.0) return 0.0;
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          return std::max(s.a.dot(d), 0.0) / (s.b - s.a.dot(e_));
        } else if constexpr (std::is_same_v<T, Ball>) {
          return quadratic_gauge(d / s.r, (s.c - e_) / s.r);
        } else if constexpr (std::is_same_v<T, PNormBall>) {
          const Vec bh = s.offset - e_;
          if (s.p == 2.0) return quadratic_gauge(d, bh);
          return power_gauge(d, bh, s.p);
        } else if constexpr (std::is_same_v<T, PNormEllipsoid>) {
          const Vec v = s.A() * d / s.tau();
          const Vec bh = (s.b() - s.A() * e_) / s.tau();
          if (s.p() == 2.0) return quadratic_gauge(v, bh);
          return power_gauge(v, bh, s.p());
        } else {
          if (s.c.norm() <= s.rho) return quadratic_gauge(d / s.rho, (s.c - e_) / s.rho);
          return generic_gauge(set_, e_, d, R_, D_);
        }
      },
      set_.variant());
}

GaugeEval GaugeOracle::eval(const Vec& y) const {
  GaugeEval out;
  out.value = value(y);
  if (out.value == 0.0) {
    out.half_sq_subgrad = Vec::Zero(y.size());
    return out;
  }
  Vec yb = e_ + (y - e_) / out.value;
  Vec zeta = detail::unit_normal_unchecked(set_, yb, NormalPolicy::ball_facet);
  const double s = zeta.dot(yb - e_);
  out.half_sq_subgrad = (out.value / s) * zeta;
  out.boundary_point = std::move(yb);
  out.unit_normal = std::move(zeta);
  return out;
}

}  // namespace gaugeopt
