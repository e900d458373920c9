#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "gaugeopt/gauge.hpp"

namespace gaugeopt {

double ball_gauge(const Vec& c, double r, const Vec& z) {
  if (!c.allFinite() || !z.allFinite() || !std::isfinite(r))
    throw Error(ErrorCode::non_finite, "ball_gauge");
  const double q = z.squaredNorm();
  if (q == 0.0) return 0.0;
  // z / lam in B  <=>  a lam^2 + 2 (c^T z) lam - |z|^2 >= 0, a = r^2 - |c|^2.
  // The smallest admissible lam is |z|^2 / (c^T z + sqrt(disc)) in every case;
  // a == 0 reduces to |z|^2 / (2 c^T z).
  const double w = c.dot(z);
  const double a = r * r - c.squaredNorm();
  const double disc = w * w + a * q;
  if (disc < 0.0) return kInf;
  const double den = w + std::sqrt(disc);
  if (!(den > 0.0)) return kInf;
  return q / den;
}

Mat ball_gauge_hessian(const Vec& y_bar, const Vec& zeta, double r) {
  if (y_bar.size() != zeta.size()) throw Error(ErrorCode::dimension_mismatch, "ball_gauge_hessian");
  if (!(r > 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be positive");
  const Vec zb = r * zeta;
  const double s = zb.dot(y_bar);
  if (!(s > 0.0)) throw Error(ErrorCode::not_interior, "origin not interior to supporting cone");
  const Eigen::Index n = y_bar.size();
  Mat H = (s + y_bar.squaredNorm()) * zb * zb.transpose();
  H -= s * (zb * y_bar.transpose() + y_bar * zb.transpose());
  H += s * s * Mat::Identity(n, n);
  return H / (s * s * s);
}

HessianSpectrum hessian_eigenvalues(const Vec& y_bar, const Vec& zeta, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be positive");
  const double s = zeta.dot(y_bar);
  if (!(s > 0.0)) throw Error(ErrorCode::not_interior, "origin not interior to supporting cone");
  const double q = s + y_bar.squaredNorm() / r;
  const double s3 = s * s * s;
  double disc = q * q - 4.0 * s3 / r;
  if (disc < -1e-12 * q * q) throw Error(ErrorCode::invalid_argument, "negative discriminant");
  disc = std::max(disc, 0.0);
  const double big = q + std::sqrt(disc);
  HessianSpectrum out;
  out.max = big / (2.0 * s3);
  out.min = 2.0 / (r * big);  // (q - sqrt(disc)) / (2 s^3) without cancellation
  out.mid = 1.0 / (r * s);
  out.min_lower_bound = (1.0 / r) / q;
  out.max_upper_bound = q / s3;
  return out;
}

std::pair<double, double> rank2_eigenvalues(const Vec& a, const Vec& b, double C1, double C2,
                                            double C3) {
  if (a.size() != b.size()) throw Error(ErrorCode::dimension_mismatch, "rank2_eigenvalues");
  const double aa = a.squaredNorm(), bb = b.squaredNorm(), ab = a.dot(b);
  const double tr = C1 * aa + 2.0 * C2 * ab + C3 * bb;
  const double det = (C1 * C3 - C2 * C2) * std::max(0.0, aa * bb - ab * ab);
  const double root = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  // larger-magnitude root first, the other from the product
  const double far = tr >= 0.0 ? 0.5 * (tr + root) : 0.5 * (tr - root);
  const double near = far != 0.0 ? det / far : 0.0;
  return {std::min(far, near), std::max(far, near)};
}

LocalStructure local_structure(const GaugeEval& eval, const Vec& e, double alpha, double beta) {
  if (!(eval.value > 0.0) || !eval.boundary_point || !eval.unit_normal)
    throw Error(ErrorCode::invalid_argument, "local_structure needs a nonzero gauge value");
  if (alpha < 0.0 || beta < 0.0) throw Error(ErrorCode::invalid_argument, "negative constant");
  const Vec rel = *eval.boundary_point - e;
  const double s = eval.unit_normal->dot(rel);
  if (!(s > 0.0)) throw Error(ErrorCode::not_interior, "zeta^T (y_bar - e) <= 0");
  const double d2 = rel.squaredNorm();
  const double s3 = s * s * s;
  // q^2 - 4 c s^3 with q = s + c d2, written as a sum of squares so the
  // centered case (d2 = s^2 = c s) does not cancel.
  const double t2 = (rel - s * *eval.unit_normal).squaredNorm();
  auto discriminant = [&](double c) { return (s - c * d2) * (s - c * d2) + 4.0 * c * s * t2; };
  LocalStructure out;

  if (alpha == 0.0) {
    out.mu_local = 0.0;
    out.mu_lower_bound = 0.0;
  } else if (std::isinf(alpha)) {
    out.mu_local = 1.0 / d2;  // alpha -> inf limit
    out.mu_lower_bound = 1.0 / d2;
  } else {
    const double q = s + alpha * d2;
    const double disc = discriminant(alpha);
    out.mu_local = 2.0 * alpha / (q + std::sqrt(disc));
    out.mu_lower_bound = alpha / q;
  }

  if (std::isinf(beta)) {
    out.L_local = kInf;
    out.L_upper_bound = kInf;
  } else {
    const double q = s + beta * d2;
    const double disc = discriminant(beta);
    out.L_local = (q + std::sqrt(disc)) / (2.0 * s3);
    out.L_upper_bound = q / s3;
  }
  return out;
}

LocalStructure local_structure(const GaugeOracle& oracle, const GaugeEval& eval) {
  if (eval.value == 0.0) {
    LocalStructure out;
    out.mu_local = std::isfinite(oracle.D()) ? 1.0 / (oracle.D() * oracle.D()) : 0.0;
    out.mu_lower_bound = out.mu_local;
    out.L_local = 1.0 / (oracle.R() * oracle.R());
    out.L_upper_bound = out.L_local;
    return out;
  }
  const StructureConstants sc = local_set_constants(oracle.set(), *eval.boundary_point);
  return local_structure(eval, oracle.center(), sc.alpha, sc.beta);
}

GaugeStructure corollary_structure(const StructureConstants& sc, double R, double D) {
  GaugeStructure out;
  if (sc.alpha > 0.0 && std::isfinite(D)) out.mu = sc.alpha / (D + sc.alpha * D * D);
  if (std::isfinite(sc.beta)) out.L = (R + sc.beta * D * D) / (R * R * R);
  if (sc.beta == 0.0) out.L = 1.0 / (R * R);
  return out;
}

GaugeStructure transform_structure(double mu, double L, double lambda_min, double lambda_max) {
  GaugeStructure out;
  out.mu = mu == 0.0 ? 0.0 : lambda_min * mu;
  out.L = std::isinf(L) ? kInf : lambda_max * L;
  return out;
}

GaugeStructure transform_structure(double mu, double L, const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(A.transpose() * A, Eigen::EigenvaluesOnly);
  const double lmin = std::max(0.0, eig.eigenvalues().minCoeff());
  const double lmax = std::max(lmin, eig.eigenvalues().maxCoeff());
  return transform_structure(mu, L, lmin, lmax);
}

namespace {

// {z : ||z - bh||_2 <= 1} about the origin, |bh| < 1.
GaugeStructure translated_ball(const Vec& bh) {
  const double nb = bh.norm();
  return {1.0 / ((1.0 + nb) * (2.0 + nb)), (2.0 - nb) / ((1.0 - nb) * (1.0 - nb))};
}

GaugeStructure translated_pball(double p, const Vec& bh) {
  const StructuredSet base = StructuredSet::pnorm_ball(p, bh);
  const RadiusBounds rb = radius_bounds(base, Vec::Zero(bh.size()));
  return corollary_structure(structure_constants(base), rb.inner, rb.outer);
}

}  // namespace

namespace {

// Exact extremes of the Hessian spectrum of gamma^2 / 2 for {z : |z - bh| <= 1},
// attained at the boundary points nearest to and farthest from the origin.
GaugeStructure exact_translated_ball(const Vec& bh) {
  const double nb = bh.norm();
  return {1.0 / ((1.0 + nb) * (1.0 + nb)), 1.0 / ((1.0 - nb) * (1.0 - nb))};
}

template <class BallRule>
GaugeStructure structure_with(const GaugeOracle& oracle, BallRule ball_rule) {
  const Vec& e = oracle.center();
  return std::visit(
      [&](const auto& s) -> GaugeStructure {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          return {0.0, 1.0 / (oracle.R() * oracle.R())};
        } else if constexpr (std::is_same_v<T, Ball>) {
          const GaugeStructure t = ball_rule((s.c - e) / s.r);
          const double lam = 1.0 / (s.r * s.r);
          return transform_structure(t.mu, t.L, lam, lam);
        } else if constexpr (std::is_same_v<T, PNormBall>) {
          const Vec bh = s.offset - e;
          return s.p == 2.0 ? ball_rule(bh) : translated_pball(s.p, bh);
        } else if constexpr (std::is_same_v<T, PNormEllipsoid>) {
          const Vec bh = (s.b() - s.A() * e) / s.tau();
          const GaugeStructure t = s.p() == 2.0 ? ball_rule(bh) : translated_pball(s.p(), bh);
          const double t2 = s.tau() * s.tau();
          return transform_structure(t.mu, t.L, s.lambda_min() / t2, s.lambda_max() / t2);
        } else {
          if (s.c.norm() <= s.rho) {
            const GaugeStructure t = ball_rule((s.c - e) / s.rho);
            const double lam = 1.0 / (s.rho * s.rho);
            return transform_structure(t.mu, t.L, lam, lam);
          }
          return corollary_structure(structure_constants(oracle.set()), oracle.R(), oracle.D());
        }
      },
      oracle.set().variant());
}

}  // namespace

GaugeStructure global_structure(const GaugeOracle& oracle) {
  return structure_with(oracle, translated_ball);
}

GaugeStructure exact_structure(const GaugeOracle& oracle) {
  return structure_with(oracle, exact_translated_ball);
}

ConverseCertificate converse_certificate(const GaugeEval& eval, const Vec& e, double mu, double L) {
  ConverseCertificate out;
  if (!(eval.value > 0.0) || !eval.boundary_point || !eval.unit_normal) return out;
  const Vec& yb = *eval.boundary_point;
  const Vec& zeta = *eval.unit_normal;
  const double s = zeta.dot(yb - e);
  if (!(s > 0.0)) return out;
  if (mu > 0.0 && std::isfinite(mu)) {
    const double rad = 1.0 / (mu * s);
    out.outer = Ball{yb - rad * zeta, rad};
  }
  if (L > 0.0 && std::isfinite(L)) {
    const double rad = 1.0 / (L * s);
    out.inner = Ball{yb - rad * zeta, rad};
  }
  return out;
}

TightnessInstance tightness_instance(double gamma, double R, double D) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw Error(ErrorCode::invalid_argument, "gamma must be positive");
  if (!(R > 0.0) || !(R <= D) || !std::isfinite(D))
    throw Error(ErrorCode::invalid_argument, "need 0 < R <= D");
  Vec yb(2), zeta(2);
  yb << std::sqrt(D * D - R * R), -R;
  zeta << 0.0, -1.0;
  const double rho = 1.0 / gamma;
  Vec c = yb - rho * zeta;
  TightnessInstance out{StructuredSet::hull_ball_origin(c, rho), yb, zeta, D * D < 2.0 * R / gamma};
  return out;
}

SampledConstants estimate_constants_by_sampling(const GaugeOracle& oracle, std::size_t samples,
                                                std::uint64_t seed) {
  Rng rng(seed);
  SampledConstants out{kInf, 0.0};
  const auto n = static_cast<Eigen::Index>(oracle.dimension());
  for (std::size_t k = 0; k < samples; ++k) {
    const Vec y = oracle.center() + rng.unit_vec(n);
    const GaugeEval ev = oracle.eval(y);
    if (ev.value == 0.0) continue;  // ray never leaves the set
    const LocalStructure ls = local_structure(oracle, ev);
    out.mu_est = std::min(out.mu_est, ls.mu_local);
    out.L_est = std::max(out.L_est, ls.L_local);
  }
  if (!std::isfinite(out.mu_est)) out.mu_est = 0.0;
  return out;
}

namespace {

// max of the local L over boundary points of {z : ||z - bh||_p <= 1} seen from
// the origin. Coordinate axes are always included: for p > 2 the curvature
// peaks there and random directions in high dimension rarely come close.
double sampled_pball_L(double p, const Vec& bh, std::size_t samples, std::uint64_t seed) {
  const GaugeOracle base(StructuredSet::pnorm_ball(p, bh), Vec::Zero(bh.size()));
  const Eigen::Index m = bh.size();
  double L = 0.0;
  auto probe = [&](const Vec& y) {
    const GaugeEval ev = base.eval(y);
    if (ev.value > 0.0) L = std::max(L, local_structure(base, ev).L_local);
  };
  for (Eigen::Index i = 0; i < m; ++i) {
    probe(Vec::Unit(m, i));
    probe(-Vec::Unit(m, i));
  }
  Rng rng(seed);
  for (std::size_t k = 0; k < samples; ++k) probe(rng.unit_vec(m));
  return L;
}

}  // namespace

GaugeStructure sampled_structure(const GaugeOracle& oracle, std::size_t samples,
                                 std::uint64_t seed) {
  GaugeStructure out = exact_structure(oracle);
  const Vec& e = oracle.center();
  if (const auto* s = oracle.set().get_if<PNormBall>(); s && s->p > 2.0) {
    out.L = std::min(out.L, sampled_pball_L(s->p, s->offset - e, samples, seed));
  } else if (const auto* s = oracle.set().get_if<PNormEllipsoid>(); s && s->p() > 2.0) {
    const Vec bh = (s->b() - s->A() * e) / s->tau();
    const double L = sampled_pball_L(s->p(), bh, samples, seed);
    out.L = std::min(out.L, L * s->lambda_max() / (s->tau() * s->tau()));
  }
  return out;
}

}  // namespace gaugeopt
