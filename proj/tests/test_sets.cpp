#include <doctest.h>

#include <cmath>

#include "gaugeopt/error.hpp"
#include "gaugeopt/sets.hpp"
#include "gaugeopt/verify.hpp"

using namespace gaugeopt;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

// Boundary point of the p-ball along direction d.
Vec pball_boundary(double p, const Vec& d) { return d / pnorm(d, p); }

bool almost_member(const StructuredSet& s, const Vec& x) {
  const DefiningValue dv = defining_value(s, x);
  return dv.lhs <= dv.rhs + 1e-10 * std::max(1.0, dv.rhs);
}

}  // namespace

TEST_CASE("contains evaluates the defining inequality") {
  CHECK(contains(StructuredSet::halfspace(v2(2, 0), 4), v2(1, 1)));
  CHECK(contains(StructuredSet::pnorm_ball(2, Vec::Zero(2)), v2(0.6, 0.8)));
  CHECK_FALSE(contains(StructuredSet::ball(v2(0.5, 0), 1), v2(2, 0)));
  CHECK(contains(StructuredSet::hull_ball_origin(v2(3, 0), 1), v2(0.1, 0.0)));
  CHECK_FALSE(contains(StructuredSet::hull_ball_origin(v2(3, 0), 1), v2(0.5, 0.5)));
  CHECK_THROWS_AS(contains(StructuredSet::ball(v2(0, 0), 1), Vec::Zero(3)), Error);
}

TEST_CASE("factories validate their payloads") {
  CHECK_THROWS_AS(StructuredSet::halfspace(v2(1, 0), 0.0), Error);
  CHECK_THROWS_AS(StructuredSet::ball(v2(0, 0), -1.0), Error);
  CHECK_THROWS_AS(StructuredSet::pnorm_ball(1.0, Vec::Zero(2)), Error);
  CHECK_THROWS_AS(StructuredSet::pnorm_ellipsoid(Mat::Identity(2, 2), Vec::Zero(3), 2, 1), Error);
}

TEST_CASE("normal vectors") {
  const Vec z = normal_vector(StructuredSet::pnorm_ball(2, Vec::Zero(2)), v2(0.6, 0.8));
  CHECK(z[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(z[1] == doctest::Approx(0.8).epsilon(1e-15));

  const Vec h = normal_vector(StructuredSet::halfspace(v2(2, 0), 4), v2(2, 3));
  CHECK(h[0] == 1.0);
  CHECK(h[1] == 0.0);

  SUBCASE("p = 4 against a finite-difference normal") {
    const StructuredSet s = StructuredSet::pnorm_ball(4, Vec::Zero(2));
    const double c = std::pow(2.0, -0.25);
    const Vec x = v2(c, c);
    const Vec zeta = normal_vector(s, x);
    CHECK(zeta[0] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(zeta[1] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
    const Vec g = verify::finite_diff_gradient([&](const Vec& y) { return defining_value(s, y).lhs; },
                                               x, 1e-6);
    CHECK((g.normalized() - zeta).norm() < 1e-8);
  }

  SUBCASE("off-boundary points are rejected") {
    CHECK_THROWS_AS(normal_vector(StructuredSet::ball(v2(0, 0), 1), v2(0.5, 0)), Error);
  }

  SUBCASE("hull apex is ambiguous unless the facet normal is requested") {
    const StructuredSet hull = StructuredSet::hull_ball_origin(v2(3, 0), 1);
    try {
      normal_vector(hull, Vec::Zero(2));
      FAIL("expected ambiguous_normal");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ambiguous_normal);
    }
    const Vec n = normal_vector(hull, Vec::Zero(2), NormalPolicy::ball_facet);
    CHECK(n[0] == -1.0);
    // On the ball facet the hull normal is the ball normal.
    const Vec far = v2(4, 0);
    CHECK((normal_vector(hull, far) - v2(1, 0)).norm() < 1e-15);
  }
}

TEST_CASE("structure constants of the closed-form families") {
  const StructureConstants b2 = structure_constants(StructuredSet::pnorm_ball(2, Vec::Zero(2)));
  CHECK(b2.alpha == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b2.beta == doctest::Approx(1.0).epsilon(1e-15));

  const StructureConstants b3 = structure_constants(StructuredSet::pnorm_ball(3, Vec::Zero(2)));
  CHECK(b3.alpha == 0.0);
  CHECK(b3.beta == doctest::Approx(2.2449).epsilon(1e-4));
  CHECK(b3.beta == doctest::Approx(std::pow(2.0, 7.0 / 6.0)).epsilon(1e-14));

  const StructureConstants b15 = structure_constants(StructuredSet::pnorm_ball(1.5, Vec::Zero(4)));
  CHECK(b15.alpha == doctest::Approx(0.5 * std::pow(4.0, 0.5 - 1 / 1.5)).epsilon(1e-14));
  CHECK(std::isinf(b15.beta));

  const StructureConstants ball = structure_constants(StructuredSet::ball(v2(7, -1), 2));
  CHECK(ball.alpha == 0.5);
  CHECK(ball.beta == 0.5);

  const StructureConstants h = structure_constants(StructuredSet::halfspace(v2(1, 1), 1));
  CHECK(h.alpha == 0.0);
  CHECK(h.beta == 0.0);

  SUBCASE("ellipsoids scale the base ball by the eigenvalues of A^T A") {
    Mat A(2, 2);
    A << 2, 0, 0, 1;
    const StructureConstants e =
        structure_constants(StructuredSet::pnorm_ellipsoid(A, v2(0.1, 0), 2.0, 1.0));
    CHECK(e.alpha == doctest::Approx(1.0 / 2.0).epsilon(1e-14));  // 1 * 1 / sqrt(4)
    CHECK(e.beta == doctest::Approx(4.0).epsilon(1e-14));         // 1 * 4 / sqrt(1)
    const StructureConstants et =
        structure_constants(StructuredSet::pnorm_ellipsoid(A, v2(0.1, 0), 2.0, 2.0));
    CHECK(et.alpha == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(et.beta == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("constant propagation") {
  const StructureConstants two{2, 2};
  const StructureConstants sums[] = {two, two};
  const StructureConstants s = minkowski_sum_constants(sums);
  CHECK(s.alpha == doctest::Approx(1.0));
  CHECK(s.beta == doctest::Approx(1.0));

  const StructureConstants mixed[] = {{0.0, kInf}, {2.0, 2.0}};
  const StructureConstants sm = minkowski_sum_constants(mixed);
  CHECK(sm.alpha == 0.0);
  CHECK(sm.beta == doctest::Approx(2.0));

  const StructureConstants parts[] = {{1, 4}, {3, 5}};
  const StructureConstants i = intersection_constants(parts);
  CHECK(i.alpha == 1.0);
  CHECK(std::isinf(i.beta));
  CHECK_THROWS_AS(intersection_constants(std::span<const StructureConstants>{}), Error);

  const StructureConstants same = affine_preimage_constants({0.7, 1.3}, Mat::Identity(3, 3));
  CHECK(same.alpha == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(same.beta == doctest::Approx(1.3).epsilon(1e-15));

  Mat flat(1, 2);
  flat << 1, 0;
  const StructureConstants collapsed = affine_preimage_constants({1.0, 1.0}, flat);
  CHECK(collapsed.alpha == 0.0);
  CHECK(std::isinf(collapsed.beta));
}

TEST_CASE("radius bounds") {
  RadiusBounds r = radius_bounds(StructuredSet::ball(v2(0, 0), 1), Vec::Zero(2));
  CHECK(r.inner == 1.0);
  CHECK(r.outer == 1.0);
  r = radius_bounds(StructuredSet::halfspace(v2(2, 0), 4), Vec::Zero(2));
  CHECK(r.inner == 2.0);
  CHECK(std::isinf(r.outer));
  r = radius_bounds(StructuredSet::ball(v2(0.5, 0), 1), Vec::Zero(2));
  CHECK(r.inner == 0.5);
  CHECK(r.outer == 1.5);
  CHECK_THROWS_AS(radius_bounds(StructuredSet::ball(v2(0, 0), 1), v2(2, 0)), Error);

  SUBCASE("sampled members stay within D and points within R are members") {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
      const Eigen::Index n = 3;
      const Mat A = rng.normal_mat(n + 1, n);
      const Vec e = rng.normal_vec(n);
      const double p = 1.2 + 3.0 * rng.uniform();
      const StructuredSet s = StructuredSet::pnorm_ellipsoid(A, A * e + 0.2 * rng.unit_vec(n + 1), p, 1.0);
      const RadiusBounds rb = radius_bounds(s, e);
      REQUIRE(rb.inner <= rb.outer);
      for (int k = 0; k < 500; ++k) {
        const Vec d = rng.unit_vec(n);
        CHECK(contains(s, Vec(e + (rb.inner - 1e-10) * rng.uniform() * d)));
        const Vec far = e + 3.0 * rb.outer * rng.uniform() * d;
        if (contains(s, far)) CHECK((far - e).norm() <= rb.outer);
      }
    }
  }
}

TEST_CASE("supporting hyperplanes and ball witnesses on sampled boundary points") {
  Rng rng(11);
  for (double p : {1.5, 2.0, 3.0}) {
    const Eigen::Index n = 2;
    const StructuredSet s = StructuredSet::pnorm_ball(p, Vec::Zero(n));
    const StructureConstants sc = structure_constants(s);
    for (int t = 0; t < 200; ++t) {
      const Vec x = pball_boundary(p, rng.normal_vec(n));
      const Vec zeta = normal_vector(s, x);
      CHECK(std::abs(zeta.norm() - 1.0) < 1e-14);
      for (int k = 0; k < 50; ++k) {
        const Vec z = pball_boundary(p, rng.normal_vec(n)) * rng.uniform();
        CHECK(zeta.dot(z - x) <= 1e-10);
        if (sc.alpha > 0.0) CHECK((z - (x - zeta / sc.alpha)).norm() <= 1.0 / sc.alpha + 1e-10);
        if (sc.smooth()) {
          const Vec w = x - zeta / sc.beta + std::sqrt(rng.uniform()) / sc.beta * rng.unit_vec(n);
          CHECK(almost_member(s, w));
        }
      }
    }
  }
}

TEST_CASE("unit normals change at rates between alpha and beta") {
  Rng rng(3);
  const StructuredSet ball = StructuredSet::ball(v2(1, 2), 0.5);
  for (int t = 0; t < 200; ++t) {
    const Vec x1 = v2(1, 2) + 0.5 * rng.unit_vec(2), x2 = v2(1, 2) + 0.5 * rng.unit_vec(2);
    const double dz = (normal_vector(ball, x1) - normal_vector(ball, x2)).norm();
    CHECK(std::abs(dz - 2.0 * (x1 - x2).norm()) < 1e-8);
  }
  for (double p : {1.5, 3.0}) {
    const StructuredSet s = StructuredSet::pnorm_ball(p, Vec::Zero(2));
    const StructureConstants sc = structure_constants(s);
    for (int t = 0; t < 200; ++t) {
      const Vec x1 = pball_boundary(p, rng.normal_vec(2)), x2 = pball_boundary(p, rng.normal_vec(2));
      const double dx = (x1 - x2).norm();
      const double dz = (normal_vector(s, x1) - normal_vector(s, x2)).norm();
      CHECK(sc.alpha * dx <= dz + 1e-8);
      if (sc.smooth()) CHECK(dz <= sc.beta * dx + 1e-8);
    }
  }
}

TEST_CASE("json round trip preserves every double") {
  Rng rng(1);
  const Mat A = rng.normal_mat(3, 2);
  const StructuredSet sets[] = {
      StructuredSet::halfspace(rng.normal_vec(2), 0.1 + rng.uniform()),
      StructuredSet::ball(rng.normal_vec(2), 0.3),
      StructuredSet::pnorm_ball(1.0 + rng.uniform(), rng.normal_vec(2)),
      StructuredSet::pnorm_ellipsoid(A, rng.normal_vec(3), 4.0, 1.0 / 3.0),
      StructuredSet::hull_ball_origin(rng.normal_vec(2), 0.1),
  };
  for (const StructuredSet& s : sets) {
    const nlohmann::json j = to_json(s);
    const StructuredSet back = set_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.kind() == s.kind());
    CHECK(to_json(back) == j);
  }
  CHECK_THROWS_AS(set_from_json(nlohmann::json{{"kind", "torus"}}), Error);
  CHECK_THROWS_AS(set_from_json(nlohmann::json{{"kind", "ball"}, {"c", {1, 2}}}), Error);
}
