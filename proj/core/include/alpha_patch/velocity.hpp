#pragma once

#include <cstddef>
#include <span>

#include "alpha_patch/curve.hpp"
#include "alpha_patch/vec2.hpp"

namespace alpha_patch {

/// Biot–Savart exponent α, strictly inside (0, 1/2); the normalization c_α is 1.
class KernelParams {
 public:
  explicit KernelParams(double alpha);

  [[nodiscard]] double alpha() const { return alpha_; }
  /// Exponent 2α of the weakly singular velocity kernel.
  [[nodiscard]] double singular_exponent() const { return 2.0 * alpha_; }

 private:
  double alpha_;
};

struct BoundaryVelocity {
  VectorField v;
  VectorField dsv;
  ScalarField dsv_T;
  ScalarField dsv_N;
};

/// Per-node data seen by the boundary kernels: positions, unit tangents and the
/// metric of the Lagrangian label grid (spacing 2π/N).
struct KernelInput {
  std::span<const Vec2> nodes;
  std::span<const Vec2> T;
  std::span<const double> g;
};

/// Fused O(N²) evaluation of
///   v(x)   = −(1/2α) ∫ T(y) g(y) |γ(x)−γ(y)|^{−2α} dy,
///   ∂ₛv(x) = PV ∫ T(y) [(γ(x)−γ(y))·T(x)] |γ(x)−γ(y)|^{−2−2α} g(y) dy
/// at every node. Both use the punctured trapezoid rule over symmetric offset pairs
/// ±k (the antipode counted once) plus the zeta-function local correction of
/// SingularCorrection. One pow per ordered pair. Either output may be null.
/// Throws std::invalid_argument if two nodes are closer than 1e-12.
void evaluate_boundary_kernels(const KernelInput& in, const KernelParams& params, VectorField* v,
                               VectorField* dsv);

/// v at every node. Any regular parameterization.
VectorField velocity_on_boundary(const ClosedCurve& curve, const KernelParams& params);

/// ∂ₛv for an arc-length parameterized curve (metric constant to 1e-6 relative,
/// otherwise std::invalid_argument). Warns when the empirical Hölder exponent of T
/// does not exceed 2α.
VectorField ds_velocity_arclength(const ClosedCurve& curve, const KernelParams& params);

/// ∂ₛv in the curve's own labels, with the metric weight g(y). Same warning as above.
VectorField ds_velocity_lagrangian(const ClosedCurve& curve, const KernelParams& params);

/// v, ∂ₛv and the components ∂ₛv·T, ∂ₛv·N in one pass. No regularity warning.
BoundaryVelocity boundary_velocity(const ClosedCurve& curve, const KernelParams& params);
BoundaryVelocity boundary_velocity(const ClosedCurve& curve, const GeometryFields& geo,
                                   const KernelParams& params);

/// K(y, x) = g(y) (γ(x)−γ(y))·T(x) / |γ(x)−γ(y)|^{2+2α}.
double kernel_K(Vec2 gamma_y, double g_y, Vec2 gamma_x, Vec2 T_x, const KernelParams& params);

struct KernelSymmetryReport {
  /// sup over pairs of |K(y,x) + K(x,y)| d^{1−β+2α}.
  double constant = 0.0;
  /// Slope of log sup_{d = r} |K(y,x) + K(x,y)| against log r.
  double fitted_slope = 0.0;
  /// Fit range in arc length.
  double r_min = 0.0;
  double r_max = 0.0;
  /// Offsets whose defect rose above rounding; zero on exactly symmetric curves.
  std::size_t fit_points = 0;
};

/// Odd-symmetry defect of K on an arc-length curve, in arc-length units (g ≡ 1).
/// The slope is fitted over offsets 1..N/8. Defects below 8·N·eps of the kernel bound
/// |γ(x)−γ(y)|^{−1−2α} count as 0.
KernelSymmetryReport kernel_symmetry_check(const ClosedCurve& curve, const KernelParams& params, double beta);

/// Reference values at one node from adaptive quadrature of the trigonometric
/// interpolant of the nodes: a polynomial model of the even part in u² near the
/// singular point, integrated exactly against |u|^{−2α}, and adaptive
/// Gauss–Kronrod on the rest. Throws std::runtime_error if the far-field estimate
/// misses `tol` (relative).
Vec2 oracle_velocity(const ClosedCurve& curve, const KernelParams& params, std::size_t node, double tol = 1e-12);
Vec2 oracle_ds_velocity(const ClosedCurve& curve, const KernelParams& params, std::size_t node,
                        double tol = 1e-12);

}  // namespace alpha_patch
