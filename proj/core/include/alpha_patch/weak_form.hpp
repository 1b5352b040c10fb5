#pragma once

#include "alpha_patch/dynamics.hpp"

namespace alpha_patch {

/// φ(x, t) = ρ(|x − center| / radius) τ(t / t_support) with the bump
/// ρ(r) = exp(1 − 1/(1 − r²)) on r < 1 and the smooth step
/// τ(u) = 1 / (1 + exp(1/(1 − u) − 1/u)) on 0 < u < 1 (τ = 1 before, 0 after).
/// Every derivative of τ vanishes at both ends, so φ is admissible on [0, t_support)
/// and the trapezoid rule in time has no endpoint error terms.
struct TestFunction {
  Vec2 center{0.0, 0.0};
  double radius = 2.0;
  double t_support = 1.0;

  void validate() const;
  double value(Vec2 x, double t) const;
  double dt(Vec2 x, double t) const;
  Vec2 gradient(Vec2 x, double t) const;
};

/// Velocity at a point off the boundary, v(x) = −(1/2α) ∮ T(y) g(y) |x − γ(y)|^{−2α} dy,
/// by the trapezoid rule over the nodes.
Vec2 interior_velocity(const ClosedCurve& curve, const GeometryFields& geo, const KernelParams& params, Vec2 x);

struct WeakFormTerms {
  /// ∫_{Ω₀} φ(·, 0)
  double initial = 0.0;
  /// ∫₀^T ∫_{Ω_t} ∂ₜφ + v·∇φ, trapezoid rule over the snapshot times.
  double space_time = 0.0;
  /// |initial + space_time|
  double residual = 0.0;
};

/// Defect of the weak formulation along a trajectory. Each snapshot region, bounded
/// by the trigonometric interpolant of its nodes, is split into signed curved fan
/// cells from the vertex mean; each cell is integrated with Gauss–Legendre panels
/// graded toward the boundary.
/// Throws std::invalid_argument if the trajectory does not start at t = 0, has fewer
/// than two snapshots, or ends before the test function's time support.
WeakFormTerms weak_form_terms(const Trajectory& trajectory, const TestFunction& phi, const KernelParams& params);

double weak_form_residual(const Trajectory& trajectory, const TestFunction& phi, const KernelParams& params);

}  // namespace alpha_patch
