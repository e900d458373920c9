#include "gaugeopt/sets.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace gaugeopt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::not_on_boundary: return "point not on boundary";
    case ErrorCode::ambiguous_normal: return "ambiguous normal";
    case ErrorCode::not_interior: return "center not interior";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::non_finite: return "non-finite input";
    case ErrorCode::empty_level_set: return "empty level set";
    case ErrorCode::invalid_bracket: return "invalid bracket";
    case ErrorCode::no_convergence: return "no convergence";
  }
  return "unknown error";
}

const char* to_string(SetKind kind) {
  switch (kind) {
    case SetKind::halfspace: return "halfspace";
    case SetKind::ball: return "ball";
    case SetKind::pnorm_ball: return "pnorm_ball";
    case SetKind::pnorm_ellipsoid: return "pnorm_ellipsoid";
    case SetKind::hull_ball_origin: return "hull_ball_origin";
  }
  return "unknown";
}

namespace {

void require(bool ok, ErrorCode code, const char* what) {
  if (!ok) throw Error(code, what);
}

bool all_finite(const Vec& v) { return v.allFinite(); }

void require_exponent(double p) {
  require(std::isfinite(p) && p > 1.0, ErrorCode::invalid_argument, "p must lie in (1, inf)");
}

// Closest point parameter of conv({0} U B(c, rho)) to x along the axis:
// minimizes ||x - t c|| - t rho over t in [0, 1].
double hull_parameter(const HullBallOrigin& h, const Vec& x) {
  const double k = h.c.norm();
  if (k == 0.0) return 1.0;
  if (h.rho >= k) return 1.0;  // objective nonincreasing in t
  const double u = h.c.dot(x) / k;
  const double w = std::sqrt(std::max(0.0, x.squaredNorm() - u * u));
  const double s = h.rho * w / std::sqrt(k * k - h.rho * h.rho);
  return std::clamp((u + s) / k, 0.0, 1.0);
}

// sign(v) |v|^{p-1}, componentwise.
Vec signed_power(const Vec& v, double p) {
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out[i] = std::copysign(std::pow(std::abs(v[i]), p - 1.0), v[i]);
  return out;
}

}  // namespace

PNormEllipsoid::PNormEllipsoid(Mat A, Vec b, double p, double tau)
    : A_(std::move(A)), b_(std::move(b)), p_(p), tau_(tau) {
  require(A_.rows() > 0 && A_.cols() > 0, ErrorCode::invalid_argument, "empty matrix");
  require(A_.rows() == b_.size(), ErrorCode::dimension_mismatch, "A rows must match b");
  require(A_.allFinite() && b_.allFinite(), ErrorCode::non_finite, "ellipsoid data");
  require_exponent(p_);
  require(std::isfinite(tau_) && tau_ > 0.0, ErrorCode::invalid_argument, "tau must be positive");
  Eigen::SelfAdjointEigenSolver<Mat> eig(A_.transpose() * A_, Eigen::EigenvaluesOnly);
  lambda_min_ = std::max(0.0, eig.eigenvalues().minCoeff());
  lambda_max_ = std::max(0.0, eig.eigenvalues().maxCoeff());
}

StructuredSet StructuredSet::halfspace(Vec a, double b) {
  require(a.size() > 0, ErrorCode::invalid_argument, "empty normal");
  require(all_finite(a) && std::isfinite(b), ErrorCode::non_finite, "halfspace data");
  require(a.norm() > 0.0, ErrorCode::invalid_argument, "halfspace normal must be nonzero");
  require(b > 0.0, ErrorCode::invalid_argument, "halfspace offset must be positive");
  return StructuredSet(Halfspace{std::move(a), b});
}

StructuredSet StructuredSet::ball(Vec c, double r) {
  require(c.size() > 0, ErrorCode::invalid_argument, "empty center");
  require(all_finite(c) && std::isfinite(r), ErrorCode::non_finite, "ball data");
  require(r > 0.0, ErrorCode::invalid_argument, "radius must be positive");
  return StructuredSet(Ball{std::move(c), r});
}

StructuredSet StructuredSet::pnorm_ball(double p, Vec offset) {
  require(offset.size() > 0, ErrorCode::invalid_argument, "empty offset");
  require(all_finite(offset), ErrorCode::non_finite, "p-ball offset");
  require_exponent(p);
  return StructuredSet(PNormBall{p, std::move(offset)});
}

StructuredSet StructuredSet::pnorm_ellipsoid(Mat A, Vec b, double p, double tau) {
  return StructuredSet(PNormEllipsoid(std::move(A), std::move(b), p, tau));
}

StructuredSet StructuredSet::hull_ball_origin(Vec c, double rho) {
  require(c.size() > 0, ErrorCode::invalid_argument, "empty center");
  require(all_finite(c) && std::isfinite(rho), ErrorCode::non_finite, "hull data");
  require(rho > 0.0, ErrorCode::invalid_argument, "radius must be positive");
  return StructuredSet(HullBallOrigin{std::move(c), rho});
}

SetKind StructuredSet::kind() const { return static_cast<SetKind>(v_.index()); }

std::size_t StructuredSet::dimension() const {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Halfspace>) return s.a.size();
        else if constexpr (std::is_same_v<T, PNormBall>) return s.offset.size();
        else if constexpr (std::is_same_v<T, PNormEllipsoid>) return s.A().cols();
        else return s.c.size();
      },
      v_);
}

namespace detail {

void require_dimension(const StructuredSet& set, const Vec& x) {
  if (static_cast<std::size_t>(x.size()) != set.dimension())
    throw Error(ErrorCode::dimension_mismatch,
                "expected dimension " + std::to_string(set.dimension()) + ", got " +
                    std::to_string(x.size()));
}

Vec unit_normal_unchecked(const StructuredSet& set, const Vec& x, NormalPolicy policy) {
  Vec g = std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          return s.a;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return x - s.c;
        } else if constexpr (std::is_same_v<T, PNormBall>) {
          return signed_power(x - s.offset, s.p);
        } else if constexpr (std::is_same_v<T, PNormEllipsoid>) {
          return s.A().transpose() * signed_power(s.A() * x - s.b(), s.p());
        } else {
          const double t = hull_parameter(s, x);
          Vec d = x - t * s.c;
          if (d.norm() == 0.0) {
            // apex: the normal cone has nonempty interior
            if (policy == NormalPolicy::strict)
              throw Error(ErrorCode::ambiguous_normal, "hull apex has no canonical normal");
            return -s.c;
          }
          return d;
        }
      },
      set.variant());
  const double nrm = g.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm))
    throw Error(ErrorCode::ambiguous_normal, "defining gradient vanishes");
  return g / nrm;
}

}  // namespace detail

DefiningValue defining_value(const StructuredSet& set, const Vec& x) {
  detail::require_dimension(set, x);
  return std::visit(
      [&](const auto& s) -> DefiningValue {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          return {s.a.dot(x), s.b};
        } else if constexpr (std::is_same_v<T, Ball>) {
          return {(x - s.c).norm(), s.r};
        } else if constexpr (std::is_same_v<T, PNormBall>) {
          return {pnorm(x - s.offset, s.p), 1.0};
        } else if constexpr (std::is_same_v<T, PNormEllipsoid>) {
          return {pnorm(s.A() * x - s.b(), s.p()), s.tau()};
        } else {
          const double t = hull_parameter(s, x);
          return {(x - t * s.c).norm() - t * s.rho, 0.0};
        }
      },
      set.variant());
}

bool contains(const StructuredSet& set, const Vec& x) {
  const DefiningValue v = defining_value(set, x);
  return v.lhs <= v.rhs;
}

bool on_boundary(const StructuredSet& set, const Vec& x) {
  const DefiningValue v = defining_value(set, x);
  return std::abs(v.lhs - v.rhs) <= 1e-8 * std::max(1.0, v.rhs);
}

Vec normal_vector(const StructuredSet& set, const Vec& x, NormalPolicy policy) {
  if (!x.allFinite()) throw Error(ErrorCode::non_finite, "normal_vector input");
  if (!on_boundary(set, x)) throw Error(ErrorCode::not_on_boundary, "normal_vector");
  return detail::unit_normal_unchecked(set, x, policy);
}

StructureConstants affine_preimage_constants(const StructureConstants& sc, double lambda_min,
                                             double lambda_max) {
  require(lambda_min >= 0.0 && lambda_max >= lambda_min, ErrorCode::invalid_argument,
          "spectrum of A^T A");
  StructureConstants out;
  // alpha lambda_min / sqrt(lambda_max)
  if (sc.alpha == 0.0 || lambda_min == 0.0) out.alpha = 0.0;
  else if (std::isinf(sc.alpha)) out.alpha = kInf;
  else out.alpha = sc.alpha * lambda_min / std::sqrt(lambda_max);
  // beta lambda_max / sqrt(lambda_min)
  if (sc.beta == 0.0) out.beta = 0.0;
  else if (std::isinf(sc.beta) || lambda_min == 0.0) out.beta = kInf;
  else out.beta = sc.beta * lambda_max / std::sqrt(lambda_min);
  return out;
}

StructureConstants affine_preimage_constants(const StructureConstants& sc, const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(A.transpose() * A, Eigen::EigenvaluesOnly);
  const double lmin = std::max(0.0, eig.eigenvalues().minCoeff());
  const double lmax = std::max(lmin, eig.eigenvalues().maxCoeff());
  return affine_preimage_constants(sc, lmin, lmax);
}

namespace {

// (sum_i x_i^{-1})^{-1} with 0^{-1} = inf and inf^{-1} = 0.
double harmonic_sum(std::span<const StructureConstants> in, double StructureConstants::*field) {
  double acc = 0.0;
  for (const auto& s : in) {
    const double v = s.*field;
    if (v == 0.0) return 0.0;
    if (!std::isinf(v)) acc += 1.0 / v;
  }
  return acc == 0.0 ? kInf : 1.0 / acc;
}

}  // namespace

StructureConstants minkowski_sum_constants(std::span<const StructureConstants> inputs) {
  require(!inputs.empty(), ErrorCode::invalid_argument, "need at least one set");
  // 1/alpha and 1/beta are outer and inner ball radii, and radii add
  return {harmonic_sum(inputs, &StructureConstants::alpha),
          harmonic_sum(inputs, &StructureConstants::beta)};
}

StructureConstants intersection_constants(std::span<const StructureConstants> inputs) {
  require(!inputs.empty(), ErrorCode::invalid_argument, "need at least one set");
  StructureConstants out;
  out.alpha = kInf;
  for (const auto& s : inputs) out.alpha = std::min(out.alpha, s.alpha);
  out.beta = kInf;
  return out;
}

StructureConstants structure_constants(const StructuredSet& set) {
  return std::visit(
      [&](const auto& s) -> StructureConstants {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          return {0.0, 0.0};
        } else if constexpr (std::is_same_v<T, Ball>) {
          return {1.0 / s.r, 1.0 / s.r};
        } else if constexpr (std::is_same_v<T, PNormBall>) {
          const double k = pnorm_ball_constant(s.p, s.offset.size());
          if (s.p == 2.0) return {1.0, 1.0};
          if (s.p < 2.0) return {k, kInf};
          return {0.0, k};
        } else if constexpr (std::is_same_v<T, PNormEllipsoid>) {
          const auto m = static_cast<std::size_t>(s.A().rows());
          const double k = s.p() == 2.0 ? 1.0 : pnorm_ball_constant(s.p(), m);
          StructureConstants base{1.0, 1.0};
          if (s.p() < 2.0) base = {k, kInf};
          else if (s.p() > 2.0) base = {0.0, k};
          const double t2 = s.tau() * s.tau();
          return affine_preimage_constants(base, s.lambda_min() / t2, s.lambda_max() / t2);
        } else {
          if (s.c.norm() <= s.rho) return {1.0 / s.rho, 1.0 / s.rho};
          return {0.0, kInf};
        }
      },
      set.variant());
}

StructureConstants local_set_constants(const StructuredSet& set, const Vec& x) {
  detail::require_dimension(set, x);
  const auto* pb = set.get_if<PNormBall>();
  if (pb == nullptr) return structure_constants(set);
  // Curvature bounds of the level set of f = ||x - offset||_p^p: the Hessian
  // p(p-1) diag(|d|^{p-2}) over the gradient norm.
  const double p = pb->p;
  const Vec d = x - pb->offset;
  const double grad = p * signed_power(d, p).norm();
  double hmin = kInf;
  double hmax = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double h = std::pow(std::abs(d[i]), p - 2.0);  // 0^{-k} = inf
    hmin = std::min(hmin, h);
    hmax = std::max(hmax, h);
  }
  return {p * (p - 1.0) * hmin / grad, p * (p - 1.0) * hmax / grad};
}

RadiusBounds radius_bounds(const StructuredSet& set, const Vec& e) {
  detail::require_dimension(set, e);
  require(e.allFinite(), ErrorCode::non_finite, "center");
  const auto n = static_cast<double>(set.dimension());
  RadiusBounds rb = std::visit(
      [&](const auto& s) -> RadiusBounds {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          return {(s.b - s.a.dot(e)) / s.a.norm(), kInf};
        } else if constexpr (std::is_same_v<T, Ball>) {
          const double off = (s.c - e).norm();
          return {s.r - off, s.r + off};
        } else if constexpr (std::is_same_v<T, PNormBall>) {
          const Vec u = e - s.offset;
          const double k = std::pow(n, 0.5 - 1.0 / s.p);
          return {(1.0 - pnorm(u, s.p)) * std::min(1.0, k), std::max(1.0, k) + u.norm()};
        } else if constexpr (std::is_same_v<T, PNormEllipsoid>) {
          const double m = static_cast<double>(s.A().rows());
          const double r0 = pnorm(s.A() * e - s.b(), s.p());
          const double up = std::max(1.0, std::pow(m, 1.0 / s.p() - 0.5));
          const double down = std::max(1.0, std::pow(m, 0.5 - 1.0 / s.p()));
          const double smax = std::sqrt(s.lambda_max());
          const double smin = std::sqrt(s.lambda_min());
          const double inner = smax > 0.0 ? (s.tau() - r0) / (smax * up) : kInf;
          const double outer = smin > 1e-12 * std::max(1.0, smax)
                                   ? (s.tau() + r0) * down / smin
                                   : kInf;
          return {inner, outer};
        } else {
          const double t = hull_parameter(s, e);
          const double inner = t * s.rho - (e - t * s.c).norm();
          return {inner, std::max(e.norm(), (s.c - e).norm() + s.rho)};
        }
      },
      set.variant());
  if (!(rb.inner > 0.0)) throw Error(ErrorCode::not_interior, "radius_bounds");
  return rb;
}

}  // namespace gaugeopt
