#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <alpha_patch/stability.hpp>

#include "support.hpp"

using namespace alpha_patch;
using test_support::ellipse;

namespace {

TwinConfig short_twin(PerturbationKind kind, double eps) {
  TwinConfig cfg;
  cfg.kind = kind;
  cfg.epsilon = eps;
  cfg.simulation.stepper.dt = 2e-3;
  cfg.simulation.t_end = 0.04;
  cfg.simulation.emit_every = 5;
  cfg.params = KernelParams(0.2);
  return cfg;
}

}  // namespace

TEST_CASE("delta of a state with itself is zero and delta is symmetric") {
  const auto a = make_flow_state(ellipse(64));
  const auto d0 = delta(a, a);
  CHECK(d0.delta == 0.0);
  CHECK(d0.delta_gamma == 0.0);

  auto b = a;
  for (std::size_t j = 0; j < 64; ++j) {
    b.g_evolved[j] += 1e-3 * std::cos(static_cast<double>(j));
    b.T_evolved[j] = rotate(b.T_evolved[j], 1e-3);
  }
  const auto ab = delta(a, b);
  const auto ba = delta(b, a);
  CHECK(ab.delta == ba.delta);
  CHECK(ab.delta == ab.delta_gamma + ab.delta_g + ab.delta_T);
  CHECK(ab.delta_gamma == 0.0);
  // |T − R_θ T|² = 4 sin²(θ/2) at every node, integrated over 2π.
  CHECK(ab.delta_T == doctest::Approx(kTwoPi * 4.0 * std::pow(std::sin(5e-4), 2)).epsilon(1e-9));
}

TEST_CASE("delta rejects mismatched states") {
  const auto a = make_flow_state(ellipse(64));
  CHECK_THROWS_AS(delta(a, make_flow_state(ellipse(128))), std::invalid_argument);
  CHECK_THROWS_AS(delta(a, make_flow_state(ellipse(64), 0.5)), std::invalid_argument);
}

TEST_CASE("perturbation names") {
  for (auto k : {PerturbationKind::normal_bump, PerturbationKind::fourier_mode, PerturbationKind::label_shift})
    CHECK(perturbation_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(perturbation_kind_from_string("bump"), std::invalid_argument);
}

TEST_CASE("twin initial curves") {
  const auto base = ellipse(256);
  auto cfg = short_twin(PerturbationKind::fourier_mode, 1e-3);
  const auto [a, b] = twin_initial_curves(cfg, base);
  CHECK(metric_deviation(a) <= 1e-10);
  CHECK(metric_deviation(b) <= 1e-10);
  double far = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) far = std::max(far, norm(a[j] - b[j]));
  CHECK(far > 1e-4);
  CHECK(far < 1e-2);

  cfg.epsilon = -1.0;
  CHECK_THROWS_AS(twin_initial_curves(cfg, base), std::invalid_argument);
  cfg.epsilon = 0.0;
  const auto [c, d] = twin_initial_curves(cfg, base);
  for (std::size_t j = 0; j < c.size(); ++j) CHECK(c[j] == d[j]);
}

TEST_CASE("identical twins stay identical") {
  const auto rep = run_twin(short_twin(PerturbationKind::normal_bump, 0.0), ellipse(64));
  REQUIRE(rep.delta.size() == 5);
  for (double d : rep.delta) CHECK(d == 0.0);
  CHECK_FALSE(rep.fitted);
  CHECK(rep.holds_pointwise);
  CHECK_FALSE(rep.truncated);
}

TEST_CASE("perturbed twins yield a Gronwall fit") {
  const auto rep = run_twin(short_twin(PerturbationKind::fourier_mode, 1e-3), ellipse(64));
  REQUIRE(rep.fitted);
  CHECK(rep.in_hypothesis);
  CHECK(std::isfinite(rep.fitted_C));
  CHECK(rep.delta.front() > 0.0);
  CHECK(rep.times.front() == 0.0);
  CHECK(rep.times.back() == doctest::Approx(0.04));

  const auto shifted = run_twin(short_twin(PerturbationKind::label_shift, 1e-2), ellipse(64));
  CHECK_FALSE(shifted.in_hypothesis);
  CHECK(shifted.note.find("label-shift") != std::string::npos);
}

TEST_CASE("Gronwall fit on exact exponential data") {
  std::vector<double> t, d;
  for (int i = 0; i <= 10; ++i) {
    t.push_back(0.05 * i);
    d.push_back(2e-6 * std::exp(1.7 * t.back()));
  }
  const auto fit = fit_gronwall_constant(t, d);
  CHECK(fit.C == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(fit.residual <= 1e-12);
  CHECK(gronwall_holds_pointwise(t, d, fit.C));

  // A bump above the exponential envelope violates the bound.
  d[5] *= 1.5;
  CHECK_FALSE(gronwall_holds_pointwise(t, d, 1.7));

  d[5] = 0.0;
  CHECK_THROWS_AS(fit_gronwall_constant(t, d), std::invalid_argument);
  CHECK_THROWS_AS(fit_gronwall_constant(std::vector<double>{0.0}, std::vector<double>{1.0}),
                  std::invalid_argument);
}

TEST_CASE("negative rates keep the margin on the permissive side") {
  std::vector<double> t{0.0, 0.1, 0.2}, d{1.0, std::exp(-0.1), std::exp(-0.2)};
  CHECK(gronwall_holds_pointwise(t, d, -1.0));
  CHECK_FALSE(gronwall_holds_pointwise(t, d, -1.5));
}

TEST_CASE("kernel difference bound") {
  const auto a = make_flow_state(ellipse(64));
  CHECK(kernel_difference_bound_check(a, a, KernelParams(0.2)) == 0.0);

  TwinConfig cfg = short_twin(PerturbationKind::fourier_mode, 1e-3);
  const auto [c1, c2] = twin_initial_curves(cfg, ellipse(64));
  const double ratio = kernel_difference_bound_check(make_flow_state(c1), make_flow_state(c2), KernelParams(0.2));
  CHECK(std::isfinite(ratio));
  CHECK(ratio > 0.0);
  CHECK_THROWS_AS(kernel_difference_bound_check(a, make_flow_state(ellipse(128)), KernelParams(0.2)),
                  std::invalid_argument);
}
