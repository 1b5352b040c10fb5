#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <alpha_patch/weak_form.hpp>

#include "support.hpp"

using namespace alpha_patch;
using test_support::circle;

namespace {

ClosedCurve perturbed_circle(std::size_t n) {
  VectorField v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    const double r = 1.0 + 0.1 * std::cos(3.0 * t);
    v[j] = {r * std::cos(t), r * std::sin(t)};
  }
  return ClosedCurve::create(v);
}

Trajectory evolve(const ClosedCurve& c, double dt, double t_end, const KernelParams& params) {
  SimulationConfig sim;
  sim.stepper.dt = dt;
  sim.t_end = t_end;
  sim.emit_every = 4;
  return run_simulation(sim, c, params);
}

}  // namespace

TEST_CASE("test function") {
  TestFunction phi;
  phi.radius = 1.5;
  phi.t_support = 0.4;
  CHECK(phi.value({0.0, 0.0}, 0.0) == 1.0);
  CHECK(phi.value({1.5, 0.0}, 0.0) == 0.0);
  CHECK(phi.value({0.3, 0.2}, 0.4) == 0.0);
  CHECK(phi.value({0.3, 0.2}, 0.2) == doctest::Approx(0.5 * phi.value({0.3, 0.2}, 0.0)));
  // Derivatives against central differences.
  const Vec2 x{0.4, -0.3};
  const double e = 1e-6;
  CHECK(phi.dt(x, 0.13) ==
        doctest::Approx((phi.value(x, 0.13 + e) - phi.value(x, 0.13 - e)) / (2 * e)).epsilon(1e-7));
  const Vec2 grad = phi.gradient(x, 0.13);
  CHECK(grad.x == doctest::Approx((phi.value(x + Vec2{e, 0}, 0.13) - phi.value(x - Vec2{e, 0}, 0.13)) / (2 * e))
                      .epsilon(1e-7));
  CHECK(grad.y == doctest::Approx((phi.value(x + Vec2{0, e}, 0.13) - phi.value(x - Vec2{0, e}, 0.13)) / (2 * e))
                      .epsilon(1e-7));

  phi.radius = 0.0;
  CHECK_THROWS_AS(phi.validate(), std::invalid_argument);
}

TEST_CASE("interior velocity of a disc is a rotation") {
  const auto c = circle(256);
  const auto geo = geometry(c);
  const KernelParams params(0.25);
  for (double r : {0.2, 0.5, 0.8}) {
    const Vec2 x{r * std::cos(0.7), r * std::sin(0.7)};
    const Vec2 v = interior_velocity(c, geo, params, x);
    CHECK(std::abs(dot(v, x)) <= 1e-12 * norm(v));
  }
}

TEST_CASE("steady circle satisfies the weak form") {
  const KernelParams params(0.25);
  const auto traj = evolve(circle(64), 4e-3, 0.5, params);
  REQUIRE_FALSE(traj.aborted);
  TestFunction phi;
  phi.radius = 2.0;
  phi.t_support = 0.5;
  const auto terms = weak_form_terms(traj, phi, params);
  CHECK(terms.initial > 1.0);
  CHECK(terms.residual <= 1e-4);
  CHECK(weak_form_residual(traj, phi, params) == terms.residual);
}

TEST_CASE("weak-form residual decreases under refinement") {
  const KernelParams params(0.25);
  TestFunction phi;
  phi.center = {0.4, 0.2};
  phi.radius = 1.0;
  phi.t_support = 0.3;
  double prev = 0.0;
  for (std::size_t n : {64, 128}) {
    const auto traj = evolve(perturbed_circle(n), 0.25 / static_cast<double>(n), 0.3, params);
    REQUIRE_FALSE(traj.aborted);
    const double r = weak_form_residual(traj, phi, params);
    if (prev > 0.0) CHECK(std::log2(prev / r) >= 1.0);
    prev = r;
  }
}

TEST_CASE("weak-form input validation") {
  const KernelParams params(0.25);
  TestFunction phi;
  phi.t_support = 0.1;
  const auto traj = evolve(circle(32), 1e-2, 0.05, params);
  CHECK_THROWS_AS(weak_form_terms(traj, phi, params), std::invalid_argument);

  Trajectory one;
  one.snapshots.push_back(make_flow_state(circle(32)));
  CHECK_THROWS_AS(weak_form_terms(one, phi, params), std::invalid_argument);

  Trajectory late = evolve(circle(32), 1e-2, 0.2, params);
  for (auto& s : late.snapshots) s.time += 0.1;
  CHECK_THROWS_AS(weak_form_terms(late, phi, params), std::invalid_argument);
}
