#pragma once

// Structured closed convex sets: membership, boundary normals and the
// smoothness / strong convexity bookkeeping used by the gauge machinery.

#include <span>
#include <string>
#include <variant>

#include <json.hpp>

#include "gaugeopt/error.hpp"
#include "gaugeopt/types.hpp"

namespace gaugeopt {

/// {x : a^T x <= b}, b > 0 so the origin is strictly interior.
struct Halfspace {
  Vec a;
  double b = 1.0;
};

/// Euclidean ball B(c, r).
struct Ball {
  Vec c;
  double r = 1.0;
};

/// Translated unit p-norm ball {x : ||x - offset||_p <= 1}.
struct PNormBall {
  double p = 2.0;
  Vec offset;
};

/// {x : ||A x - b||_p <= tau} with A of size m x n.
///
/// The extreme eigenvalues of A^T A are computed once at construction and
/// cached; they drive both the affine constant propagation and the gauge
/// transform bounds.
class PNormEllipsoid {
 public:
  PNormEllipsoid(Mat A, Vec b, double p, double tau);

  const Mat& A() const { return A_; }
  const Vec& b() const { return b_; }
  double p() const { return p_; }
  double tau() const { return tau_; }
  double lambda_min() const { return lambda_min_; }  // of A^T A, clamped at 0
  double lambda_max() const { return lambda_max_; }

 private:
  Mat A_;
  Vec b_;
  double p_;
  double tau_;
  double lambda_min_ = 0.0;
  double lambda_max_ = 0.0;
};

/// conv({0} U B(c, rho)).
struct HullBallOrigin {
  Vec c;
  double rho = 1.0;
};

enum class SetKind { halfspace, ball, pnorm_ball, pnorm_ellipsoid, hull_ball_origin };

const char* to_string(SetKind kind);

/// Tagged closed convex set. Immutable after construction.
class StructuredSet {
 public:
  using Variant = std::variant<Halfspace, Ball, PNormBall, PNormEllipsoid, HullBallOrigin>;

  static StructuredSet halfspace(Vec a, double b);
  static StructuredSet ball(Vec c, double r);
  static StructuredSet pnorm_ball(double p, Vec offset);
  static StructuredSet pnorm_ellipsoid(Mat A, Vec b, double p, double tau);
  static StructuredSet hull_ball_origin(Vec c, double rho);

  SetKind kind() const;
  std::size_t dimension() const;
  const Variant& variant() const { return v_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

 private:
  explicit StructuredSet(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Strong convexity (alpha) and smoothness (beta) of a set.
///
/// alpha == 0 means "not strongly convex". beta == kInf means "not smooth"
/// and beta == 0 means "infinitely smooth" (inner balls of every radius fit,
/// as for a halfspace).
struct StructureConstants {
  double alpha = 0.0;
  double beta = kInf;

  bool strongly_convex() const { return alpha > 0.0; }
  bool smooth() const { return beta < kInf; }
};

struct RadiusBounds {
  double inner = 0.0;  // R: no non-member closer to e than this
  double outer = kInf;  // D: no member farther from e than this
};

enum class NormalPolicy {
  strict,      // refuse at nonsmooth points with no canonical normal
  ball_facet,  // at the hull apex return the axis normal -c/||c||
};

/// Left- and right-hand side of the defining inequality lhs(x) <= rhs.
struct DefiningValue {
  double lhs;
  double rhs;
};

DefiningValue defining_value(const StructuredSet& set, const Vec& x);

bool contains(const StructuredSet& set, const Vec& x);

/// |lhs - rhs| <= 1e-8 max(1, rhs).
bool on_boundary(const StructuredSet& set, const Vec& x);

Vec normal_vector(const StructuredSet& set, const Vec& x,
                  NormalPolicy policy = NormalPolicy::strict);

StructureConstants structure_constants(const StructuredSet& set);

/// Local (alpha, beta) of the set at a boundary point x. Equals the global
/// constants except for p-norm balls, where the level-set curvature of
/// ||x - offset||_p^p is evaluated at x.
StructureConstants local_set_constants(const StructuredSet& set, const Vec& x);

/// Constants of {x : A x + b in S} given those of S.
StructureConstants affine_preimage_constants(const StructureConstants& sc, const Mat& A);
StructureConstants affine_preimage_constants(const StructureConstants& sc, double lambda_min,
                                             double lambda_max);
StructureConstants minkowski_sum_constants(std::span<const StructureConstants> inputs);
StructureConstants intersection_constants(std::span<const StructureConstants> inputs);

RadiusBounds radius_bounds(const StructuredSet& set, const Vec& e);

nlohmann::json to_json(const StructuredSet& set);
StructuredSet set_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Ball& ball);

namespace detail {
// Normal direction at x without the boundary check.
Vec unit_normal_unchecked(const StructuredSet& set, const Vec& x, NormalPolicy policy);
void require_dimension(const StructuredSet& set, const Vec& x);
}  // namespace detail

}  // namespace gaugeopt
