#include <doctest.h>

#include <cmath>

#include "gaugeopt/steps.hpp"
#include "gaugeopt/verify.hpp"

using namespace gaugeopt;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

ComponentFunction dist(const Vec& center) {
  ComponentFunction c;
  c.name = "dist";
  c.evaluate = [center](const Vec& y) { return ComponentValue{(y - center).norm(), y - center}; };
  c.M = 1.0;
  c.mu = 1.0;
  c.L = 1.0;
  return c;
}

// f(y) = sqrt(y^T H y), so f^2 / 2 is H-quadratic.
ComponentFunction quad(const Mat& H) {
  ComponentFunction c;
  c.name = "quad";
  c.evaluate = [H](const Vec& y) { return ComponentValue{std::sqrt(y.dot(H * y)), H * y}; };
  return c;
}

const FiniteMaxProblem kNorm(2, {dist(Vec::Zero(2))});

}  // namespace

TEST_CASE("subgradient step") {
  CHECK((subgrad_step(kNorm, v2(2, 0), 0.5).next_point - v2(1, 0)).norm() <= 1e-15);
  CHECK((subgrad_step(kNorm, v2(2, 0), 0.0).next_point - v2(2, 0)).norm() == 0.0);

  // a uniquely active component behaves like the single-component problem
  const FiniteMaxProblem two(2, {dist(v2(0, 0)), dist(v2(10, 0))});
  const FiniteMaxProblem only(2, {dist(v2(10, 0))});
  const StepResult a = subgrad_step(two, v2(1, 1), 0.3);
  const StepResult b = subgrad_step(only, v2(1, 1), 0.3);
  CHECK((a.next_point - b.next_point).norm() <= 1e-15);
  CHECK(a.active_components == std::vector<std::size_t>{1});
}

TEST_CASE("generalized gradient step") {
  const StepResult s = gen_grad_step(kNorm, v2(2, 0), 0.5);
  CHECK((s.next_point - v2(1, 0)).norm() <= 1e-15);

  const FiniteMaxProblem sym(2, {dist(v2(1, 0)), dist(v2(-1, 0))});
  const StepResult t = gen_grad_step(sym, v2(0, 1), 1.0);
  CHECK(std::abs(t.next_point[0]) <= 1e-14);
  CHECK(t.active_components.size() == 2);
}

TEST_CASE("generalized gradient step agrees with support enumeration") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + trial % 5);
    Linearization lin;
    lin.y = rng.normal_vec(n);
    for (int i = 0; i < 2; ++i) {
      lin.f.push_back(0.5 + rng.uniform());
      lin.h.push_back(0.5 * lin.f.back() * lin.f.back());
      lin.a.push_back(rng.normal_vec(n));
    }
    lin.argmax = lin.f[1] > lin.f[0] ? 1 : 0;
    const double alpha = std::exp(rng.uniform() * 4 - 2);
    const StepResult s = gen_grad_step(lin, alpha);
    const verify::QpSolution q =
        verify::small_qp_enumerate(verify::QpKind::prox_linear, lin.h, lin.a, lin.y, alpha);
    CHECK((s.next_point - q.z).norm() <= 1e-8 * std::max(1.0, q.z.norm()));
  }
}

TEST_CASE("level projection step") {
  const StepResult s = level_proj_step(kNorm, v2(2, 0), 1.0);
  CHECK((s.next_point - v2(1.25, 0)).norm() <= 1e-15);
  CHECK((level_proj_step(kNorm, v2(0.5, 0), 1.0).next_point - v2(0.5, 0)).norm() == 0.0);
}

TEST_CASE("level projection agrees with support enumeration") {
  Rng rng(23);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + trial % 5);
    Linearization lin;
    lin.y = rng.normal_vec(n);
    for (int i = 0; i < 2; ++i) {
      lin.f.push_back(1.0 + rng.uniform());
      lin.h.push_back(0.5 * lin.f.back() * lin.f.back());
      lin.a.push_back(rng.normal_vec(n));
    }
    lin.argmax = lin.f[1] > lin.f[0] ? 1 : 0;
    const double f_bar = 0.5 + 0.5 * rng.uniform();
    const StepResult s = level_proj_step(lin, f_bar);
    const verify::QpSolution q =
        verify::small_qp_enumerate(verify::QpKind::level_projection, lin.h, lin.a, lin.y, f_bar);
    CHECK((s.next_point - q.z).norm() <= 1e-8 * std::max(1.0, q.z.norm()));
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("symmetric three-component projection has equal multipliers") {
  Linearization lin;
  lin.y = Vec::Zero(3);
  for (int i = 0; i < 3; ++i) {
    lin.f.push_back(1.0);
    lin.h.push_back(0.5);
    lin.a.push_back(Vec::Unit(3, i));
  }
  const verify::QpSolution q =
      verify::small_qp_enumerate(verify::QpKind::level_projection, lin.h, lin.a, lin.y, 0.5);
  REQUIRE(q.multipliers.size() == 3);
  CHECK(q.multipliers[0] == doctest::Approx(q.multipliers[1]).epsilon(1e-10));
  CHECK(q.multipliers[1] == doctest::Approx(q.multipliers[2]).epsilon(1e-10));
  const StepResult s = level_proj_step(lin, 0.5);
  CHECK((s.next_point - q.z).norm() <= 1e-10);
}

TEST_CASE("Armijo generalized gradient") {
  const Mat H = (Mat(2, 2) << 3, 1, 1, 2).finished();
  const double L = 0.5 * (5 + std::sqrt(5.0));
  const FiniteMaxProblem p(2, {quad(H)});
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec y = rng.normal_vec(2);
    const StepResult s = armijo_gen_grad(p, y, 1.0 / L, 0.5, L / 4);
    CHECK(s.step_size == doctest::Approx(1.0 / L));
    CHECK_FALSE(s.stalled);
  }

  const Vec y = v2(1, -2);
  const StepResult big = armijo_gen_grad(p, y, 1e6 / L, 0.5, 1e-4);
  CHECK_FALSE(big.stalled);
  const double fy = p.value(y), fz = p.value(big.next_point);
  CHECK(0.5 * fz * fz <= 0.5 * fy * fy - 1e-4 * (big.next_point - y).squaredNorm());

  const StepResult at_min = armijo_gen_grad(p, Vec::Zero(2), 1.0, 0.5, 0.1);
  CHECK(at_min.next_point.norm() == 0.0);
}
