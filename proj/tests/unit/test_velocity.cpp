#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <alpha_patch/parallel.hpp>
#include <alpha_patch/singular_quadrature.hpp>
#include <alpha_patch/velocity.hpp>

#include "support.hpp"

using namespace alpha_patch;
using test_support::circle;
using test_support::ellipse;
using test_support::star;

// Circle: closed form −(1/2α)·2πΓ(1−2α)/(Γ(2−α)Γ(−α)). Ellipse: 60-digit quadrature of
// the exact curve after the substitution u = w^k, agreeing for k = 5 and 8.
namespace ref {

struct CircleCase {
  double alpha;
  double vT;  // v·T on the unit circle
};
constexpr CircleCase kCircle[] = {
    {0.1, -3.558708152290798950683},
    {0.25, -4.944199139470325115824},
    {0.4, -10.83900948493224099502},
};

// Ellipse (2 cos x, sin x) at the label x = π/4.
struct EllipseCase {
  double alpha;
  Vec2 v;
  Vec2 dsv;
};
constexpr EllipseCase kEllipse[] = {
    {0.1, {3.297270431741781909, -2.9580291256890629031}, {1.9177201521908388391, 1.9954947316828550651}},
    {0.25, {4.4944619909555980516, -3.3495069884911312496}, {2.1700998488655115504, 2.5568594602644031659}},
    {0.4, {9.738625953178064991234, -5.813221317285626132185}, {3.459523707001439364024, 5.190669066815885299315}},
};

}  // namespace ref

TEST_CASE("kernel parameters") {
  CHECK_THROWS_AS(KernelParams(0.0), std::invalid_argument);
  CHECK_THROWS_AS(KernelParams(0.5), std::invalid_argument);
  CHECK(KernelParams(0.3).singular_exponent() == doctest::Approx(0.6));
}

TEST_CASE("zeta coefficients of the singular correction") {
  struct Z {
    double a, z0, z2, z4;
  };
  for (auto z : {Z{0.2, -0.73392092489634059224, -0.0075229347765968257254, 0.0016960463875825191881},
                 Z{0.5, -1.4603545088095868129, -0.02548520188983303595, 0.0044410113354794319585},
                 Z{0.8, -4.4375384158955504719, -0.054788441243880423318, 0.0070119720770910510917}}) {
    const quadrature::SingularCorrection c(z.a);
    CHECK(c.zeta0() == doctest::Approx(z.z0).epsilon(1e-13));
    CHECK(c.zeta2() == doctest::Approx(z.z2).epsilon(1e-12));
    CHECK(c.zeta4() == doctest::Approx(z.z4).epsilon(1e-12));
  }
}

TEST_CASE("corrected trapezoid on a weakly singular integrand") {
  // ∫_{−π}^{π} |u|^{-a} cos u du with a = 0.5: periodic extension is not smooth at ±π,
  // so use a periodic integrand instead: |2 sin(u/2)|^{-a} = |u|^{-a} φ(u).
  const double a = 0.5;
  const quadrature::SingularCorrection c(a);
  // ∫_0^{2π} |2 sin(u/2)|^{-a} du = 2π Γ(1−a)/Γ(1−a/2)².
  const double exact = kTwoPi * std::tgamma(1.0 - a) / std::pow(std::tgamma(1.0 - 0.5 * a), 2);
  double prev = 0.0;
  for (int n : {32, 64, 128}) {
    const double h = kTwoPi / n;
    double sum = 0.0;
    for (int k = 1; k < n; ++k) sum += h * std::pow(std::abs(2.0 * std::sin(0.5 * k * h)), -a);
    auto phi = [&](double u) { return std::pow(std::abs(u), a) * std::pow(std::abs(2.0 * std::sin(0.5 * u)), -a); };
    const double err = std::abs(sum + c.weakly_singular(h, 1.0, phi(h), phi(2.0 * h)) - exact);
    CHECK(err <= 1e-6);
    if (prev > 0.0) CHECK(std::log2(prev / err) >= 4.0);
    prev = err;
  }
}

TEST_CASE("circle velocity matches the reference") {
  for (const auto& c : ref::kCircle) {
    const auto curve = circle(256);
    const auto geo = geometry(curve);
    const auto v = velocity_on_boundary(curve, KernelParams(c.alpha));
    for (std::size_t j = 0; j < curve.size(); j += 17) {
      CHECK(dot(v[j], geo.T[j]) == doctest::Approx(c.vT).epsilon(1e-10));
      CHECK(std::abs(dot(v[j], geo.Nrm[j])) <= 1e-10);
    }
  }
}

TEST_CASE("circle velocity scales as R^(1-2α)") {
  const double alpha = 0.25;
  const auto v1 = velocity_on_boundary(circle(128, 1.0), KernelParams(alpha));
  const auto v3 = velocity_on_boundary(circle(128, 3.0), KernelParams(alpha));
  const double s = std::pow(3.0, 1.0 - 2.0 * alpha);
  for (std::size_t j = 0; j < 128; j += 9) CHECK(norm(v3[j]) == doctest::Approx(s * norm(v1[j])).epsilon(1e-12));
}

TEST_CASE("ellipse velocity and derivative match the reference") {
  for (const auto& e : ref::kEllipse) {
    const auto curve = ellipse(1024);
    const std::size_t node = 128;  // label π/4
    const KernelParams params(e.alpha);
    const auto v = velocity_on_boundary(curve, params);
    CHECK(norm(v[node] - e.v) <= 1e-9 * norm(e.v));
    const auto dsv = ds_velocity_lagrangian(curve, params);
    CHECK(norm(dsv[node] - e.dsv) <= 1e-7 * norm(e.dsv));

    const Vec2 ov = oracle_velocity(curve, params, node);
    CHECK(norm(ov - e.v) <= 1e-10 * norm(e.v));
    const Vec2 od = oracle_ds_velocity(curve, params, node);
    CHECK(norm(od - e.dsv) <= 1e-8 * norm(e.dsv));
  }
}

TEST_CASE("boundary velocity is a fused evaluation of the same quantities") {
  const auto curve = star(256);
  const KernelParams params(0.2);
  const auto bv = boundary_velocity(curve, params);
  const auto v = velocity_on_boundary(curve, params);
  const auto d = ds_velocity_lagrangian(curve, params);
  const auto geo = geometry(curve);
  for (std::size_t j = 0; j < curve.size(); ++j) {
    CHECK(bv.v[j] == v[j]);
    CHECK(bv.dsv[j] == d[j]);
    CHECK(bv.dsv_T[j] == doctest::Approx(dot(d[j], geo.T[j])).scale(1.0).epsilon(1e-14));
    CHECK(bv.dsv_N[j] == doctest::Approx(dot(d[j], geo.Nrm[j])).scale(1.0).epsilon(1e-14));
  }
}

TEST_CASE("derivative formula agrees with the spectral derivative of v") {
  // The five-lobed star needs N = 2048 before its arc-length samples resolve the
  // spectral derivative to 1e-6.
  for (const auto& curve : {arc_length_reparameterize(ellipse(1024)), arc_length_reparameterize(star(2048))}) {
    const KernelParams params(0.25);
    const auto v = velocity_on_boundary(curve, params);
    const auto dsv = ds_velocity_arclength(curve, params);
    ScalarField vx(v.size()), vy(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
      vx[j] = v[j].x;
      vy[j] = v[j].y;
    }
    const double g = total_length(curve) / kTwoPi;
    const auto dx = differentiate(vx, 1, DiffScheme::spectral);
    const auto dy = differentiate(vy, 1, DiffScheme::spectral);
    double err = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      err = std::max(err, norm(Vec2{dx[j] / g, dy[j] / g} - dsv[j]));
      scale = std::max(scale, norm(dsv[j]));
    }
    CHECK(err <= 1e-5 * scale);
  }
}

TEST_CASE("ds_velocity_arclength requires an arc-length curve") {
  CHECK_THROWS_AS(ds_velocity_arclength(ellipse(128), KernelParams(0.2)), std::invalid_argument);
}

TEST_CASE("Euclidean equivariance") {
  const auto base = star(256);
  const double angle = 0.7;
  const Vec2 shift{0.3, -1.1};
  VectorField moved(base.size());
  for (std::size_t j = 0; j < base.size(); ++j) moved[j] = rotate(base[j], angle) + shift;
  const auto other = ClosedCurve::create(moved);
  const KernelParams params(0.3);
  const auto a = boundary_velocity(base, params);
  const auto b = boundary_velocity(other, params);
  for (std::size_t j = 0; j < base.size(); ++j) {
    CHECK(norm(b.v[j] - rotate(a.v[j], angle)) <= 1e-12 * norm(a.v[j]) + 1e-12);
    CHECK(norm(b.dsv[j] - rotate(a.dsv[j], angle)) <= 1e-12 * norm(a.dsv[j]) + 1e-11);
  }
}

TEST_CASE("kernel odd symmetry") {
  const KernelParams params(0.2);
  CHECK(kernel_K({1.0, 0.0}, 1.0, {0.0, 0.0}, {1.0, 0.0}, params) ==
        doctest::Approx(-1.0));
  CHECK_THROWS_AS(kernel_K({0.0, 0.0}, 1.0, {0.0, 0.0}, {1.0, 0.0}, params), std::invalid_argument);

  const auto rc = kernel_symmetry_check(circle(512), params, 1.0);
  CHECK(rc.constant == 0.0);
  CHECK(rc.fit_points == 0);

  // On a smooth curve the defect decays like d^{β−1−2α} with β = 1 or faster.
  const auto e1 = kernel_symmetry_check(arc_length_reparameterize(ellipse(512)), params, 1.0);
  const auto e2 = kernel_symmetry_check(arc_length_reparameterize(ellipse(1024)), params, 1.0);
  CHECK(e1.fitted_slope >= -1.0 + 1.0 - 0.4 - 0.15);
  CHECK(std::abs(e2.constant - e1.constant) <= 0.1 * e1.constant);
}

TEST_CASE("results do not depend on the worker count") {
  const auto curve = star(512);
  const KernelParams params(0.35);
  set_worker_count(1);
  const auto one = boundary_velocity(curve, params);
  set_worker_count(3);
  const auto three = boundary_velocity(curve, params);
  set_worker_count(0);
  for (std::size_t j = 0; j < curve.size(); ++j) {
    CHECK(one.v[j] == three.v[j]);
    CHECK(one.dsv[j] == three.dsv[j]);
  }
}

TEST_CASE("parallel_for visits every index once") {
  for (unsigned w : {1u, 2u, 5u}) {
    set_worker_count(w);
    std::vector<int> hits(1001, 0);
    parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) ++hits[i];
    });
    for (int h : hits) CHECK(h == 1);
  }
  set_worker_count(0);
}

TEST_CASE("coincident nodes are rejected") {
  VectorField nodes(32);
  for (std::size_t j = 0; j < 32; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / 32.0;
    nodes[j] = {std::cos(t), std::sin(t)};
  }
  nodes[3] = nodes[2] + Vec2{1e-14, 0.0};
  const auto c = ClosedCurve::unchecked(nodes);
  CHECK_THROWS_AS(velocity_on_boundary(c, KernelParams(0.2)), std::invalid_argument);
}
