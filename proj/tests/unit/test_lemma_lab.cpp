#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <alpha_patch/lemma_lab.hpp>

#include "support.hpp"

using namespace alpha_patch;
using test_support::circle;
using test_support::ellipse;

namespace {

HolderOptions quick(bool refine = false) {
  HolderOptions o;
  o.refine = refine;
  return o;
}

}  // namespace

TEST_CASE("estimate selection") {
  CHECK(estimate_ids().size() == 13);
  CHECK(estimate_ids().front() == "L2.2-2.2a");
  const auto l22 = select_estimates("L2.2");
  CHECK(l22.size() == 9);
  const auto mixed = select_estimates("L5.1-pv, L3.2");
  REQUIRE(mixed.size() == 2);
  CHECK(mixed[0] == "L3.2-holder");  // canonical order
  CHECK(mixed[1] == "L5.1-pv");
  CHECK(select_estimates("L5.1,L5.1-odd").size() == 2);
  CHECK(select_estimates("").empty());
  CHECK_THROWS_WITH_AS(select_estimates("L3.2,L9.9"), "unknown estimate id 'L9.9'", std::invalid_argument);
  // A prefix must end at a dash boundary.
  CHECK_THROWS_AS(select_estimates("L2"), std::invalid_argument);
}

TEST_CASE("curve kind names") {
  for (auto k : {CurveKind::circle, CurveKind::ellipse, CurveKind::star, CurveKind::rough_c1beta,
                 CurveKind::w2p_spike})
    CHECK(curve_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(curve_kind_from_string("square"), std::invalid_argument);
}

TEST_CASE("test curve generation") {
  TestCurveParams p;
  p.n = 512;
  for (auto k : {CurveKind::circle, CurveKind::ellipse, CurveKind::star, CurveKind::rough_c1beta,
                 CurveKind::w2p_spike}) {
    const auto c = generate_test_curve(k, p);
    CHECK(c.size() == 512);
    CHECK(enclosed_area(c) > 0.0);
  }
  const auto e = generate_test_curve(CurveKind::ellipse, p);
  CHECK(e[0] == Vec2{2.0, 0.0});

  p.amp = 1.2;
  CHECK_THROWS_AS(generate_test_curve(CurveKind::star, p), std::invalid_argument);
  p.amp = 0.3;
  p.beta0 = 1.0;
  CHECK_THROWS_AS(generate_test_curve(CurveKind::rough_c1beta, p), std::invalid_argument);
  p.beta0 = 0.5;
  p.n = 8;
  CHECK_THROWS_AS(generate_test_curve(CurveKind::circle, p), std::invalid_argument);
}

TEST_CASE("rough curve depends only on its seed") {
  TestCurveParams p;
  p.n = 1024;
  p.beta0 = 0.6;
  const auto a = generate_test_curve(CurveKind::rough_c1beta, p);
  const auto b = generate_test_curve(CurveKind::rough_c1beta, p);
  for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == b[j]);
  p.seed = 8;
  const auto c = generate_test_curve(CurveKind::rough_c1beta, p);
  double diff = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) diff = std::max(diff, norm(a[j] - c[j]));
  CHECK(diff > 1e-3);
}

TEST_CASE("rough curve tangent has the requested Hölder exponent") {
  TestCurveParams p;
  p.n = 4096;
  p.beta0 = 0.6;
  const auto c = arc_length_reparameterize(generate_test_curve(CurveKind::rough_c1beta, p));
  CHECK(empirical_holder_exponent(geometry(c).T, total_length(c)) == doctest::Approx(0.6).epsilon(0.2));
}

TEST_CASE("default δ grid") {
  const auto offs = default_delta_offsets(1024);
  CHECK(offs.front() == 8);
  CHECK(offs.back() == 64);
  CHECK(offs.size() <= 12);
  CHECK_THROWS_AS(default_delta_offsets(64), std::invalid_argument);
}

TEST_CASE("Hölder regressions on a smooth curve") {
  const auto c = arc_length_reparameterize(ellipse(512));
  const KernelParams params(0.2);
  const auto r = verify_dsv_holder(c, params, 1.0, quick());
  CHECK(r.estimate_id == "L3.2-holder");
  CHECK(r.predicted_exponent == doctest::Approx(0.6));
  CHECK(r.fitted_exponent >= r.predicted_exponent - 0.12);
  CHECK(std::isnan(r.refinement_stability));

  const auto t = verify_dsvT_holder(c, params, 4.0, quick());
  CHECK(t.predicted_exponent == doctest::Approx(0.75));
  CHECK(t.fitted_exponent >= t.predicted_exponent - 0.12);
  REQUIRE(t.contrast_exponent);
}

TEST_CASE("Hölder regression input checks") {
  const auto c = arc_length_reparameterize(ellipse(256));
  const KernelParams params(0.2);
  HolderOptions o = quick();
  o.delta_offsets = {8};
  CHECK_THROWS_AS(verify_dsv_holder(c, params, 1.0, o), std::invalid_argument);
  o.delta_offsets = {2, 8};
  CHECK_THROWS_AS(verify_dsv_holder(c, params, 1.0, o), std::invalid_argument);
  CHECK_THROWS_AS(verify_dsv_holder(ellipse(256), params, 1.0, quick()), std::invalid_argument);
  CHECK_THROWS_AS(verify_dsvT_holder(c, params, 1.0, quick()), std::invalid_argument);
}

TEST_CASE("near and far parts reconstruct the tangential difference") {
  const KernelParams params(0.3);
  const auto c = arc_length_reparameterize(ellipse(512));
  for (std::size_t s : {0u, 100u, 301u}) {
    const auto r = split_I1_I2(c, params, s, 16, 4.0);
    CHECK(std::abs(r.I1 + r.I2 - r.delta_dsvT) <= 1e-8 * (std::abs(r.I1) + std::abs(r.I2)));
    CHECK(std::isfinite(r.bound_ratio_1));
    CHECK(std::isfinite(r.bound_ratio_2));
  }
  const auto rc = split_I1_I2(circle(256), params, 5, 8, 4.0);
  CHECK(std::abs(rc.I1) <= 1e-10);
  CHECK(std::abs(rc.I2) <= 1e-10);

  CHECK_THROWS_AS(split_I1_I2(c, params, 0, 2, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(split_I1_I2(c, params, 0, 100, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(split_I1_I2(c, params, 512, 16, 4.0), std::out_of_range);
}

TEST_CASE("kernel lemma") {
  const auto c = arc_length_reparameterize(ellipse(256));
  const KernelParams params(0.2);
  const ScalarField zero(c.size(), 0.0);
  CHECK(verify_kernel_lemma(c, params, zero, 1.0, false).empirical_constant == 0.0);

  ScalarField a(c.size());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = std::cos(c.label_spacing() * static_cast<double>(j));
  const auto r = verify_kernel_lemma(c, params, a, 1.0, true);
  CHECK(r.empirical_constant > 0.0);
  CHECK(std::isfinite(r.empirical_constant));
  CHECK(r.refinement_stability <= 0.1);
  CHECK_THROWS_AS(verify_kernel_lemma(c, params, ScalarField(10, 1.0), 1.0, false), std::invalid_argument);
}

TEST_CASE("estimate suite on the circle") {
  const auto reports =
      run_estimate_suite(circle(256), KernelParams(0.25), estimate_ids(), SuiteOptions{4.0, 1.0, quick(true)});
  REQUIRE(reports.size() == estimate_ids().size());
  for (std::size_t k = 0; k < reports.size(); ++k) {
    CHECK(reports[k].estimate_id == estimate_ids()[k]);
    CHECK(reports[k].refinement_stability <= 0.1);
  }
}
