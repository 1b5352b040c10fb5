#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alpha_patch/vec2.hpp"

namespace alpha_patch {

enum class DiffScheme { spectral, fd4 };

std::string_view to_string(DiffScheme scheme);
DiffScheme diff_scheme_from_string(std::string_view name);

/// A closed, simple, counterclockwise planar curve sampled at the uniform
/// Lagrangian labels x_j = 2πj/N.
class ClosedCurve {
 public:
  /// Validating constructor: N ≥ 16, no coincident nodes, positive signed area,
  /// regular parameterization and no self-intersections. Throws std::invalid_argument.
  static ClosedCurve create(VectorField nodes, DiffScheme scheme = DiffScheme::spectral);

  /// Skips validation. Intended for curves produced inside a time step, where the
  /// O(N²) simplicity sweep would dominate the cost.
  static ClosedCurve unchecked(VectorField nodes, DiffScheme scheme = DiffScheme::spectral);

  [[nodiscard]] std::span<const Vec2> nodes() const { return nodes_; }
  [[nodiscard]] const Vec2& operator[](std::size_t j) const { return nodes_[j]; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] DiffScheme scheme() const { return scheme_; }
  /// Spacing of the Lagrangian label grid, 2π/N.
  [[nodiscard]] double label_spacing() const { return kTwoPi / static_cast<double>(nodes_.size()); }

 private:
  ClosedCurve(VectorField nodes, DiffScheme scheme) : nodes_(std::move(nodes)), scheme_(scheme) {}

  VectorField nodes_;
  DiffScheme scheme_ = DiffScheme::spectral;
};

/// Metric, frame and curvature at every node.
struct GeometryFields {
  ScalarField g;      // |∂ₓγ|
  VectorField T;      // unit tangent
  VectorField Nrm;    // outer normal, −T^⊥
  ScalarField kappa;  // signed curvature, +1/R on a counterclockwise circle
};

struct NormReport {
  double holder_exponent = 1.0;
  double holder_seminorm = 0.0;
  double sobolev_p = 2.0;
  double sobolev_seminorm = 0.0;
};

/// Discrete ∂ₓγ (order 1) or ∂ₓ²γ (order 2) using the curve's scheme.
VectorField differentiate(const ClosedCurve& curve, int order);

/// Periodic derivative of a scalar field sampled on [0, 2π).
ScalarField differentiate(std::span<const double> samples, int order, DiffScheme scheme);

/// Throws if any metric value falls below 1e-10.
GeometryFields geometry(const ClosedCurve& curve);

/// Trapezoid rule for ∫ g dx over one period.
double total_length(const ClosedCurve& curve);

/// Shoelace area of the node polygon (positive for counterclockwise curves).
double signed_area(std::span<const Vec2> nodes);

/// ½∮(x dy − y dx) using the differentiation scheme; spectrally accurate for
/// smooth curves, unlike the polygon area.
double enclosed_area(const ClosedCurve& curve);

/// Minimum distance between consecutive nodes.
double min_node_spacing(std::span<const Vec2> nodes);

/// True if the node polygon has no crossing edges. O(N²).
bool is_simple_polygon(std::span<const Vec2> nodes);

/// Resamples the curve at N points equally spaced in arc length, node 0 fixed.
/// Uses the trigonometric interpolant of the nodes for both the arc-length map
/// and the new positions.
ClosedCurve arc_length_reparameterize(const ClosedCurve& curve);

/// Old labels x_k at which the arc length reaches k·L/N (x_0 = 0), found by Newton
/// iteration on the antiderivative of the interpolated metric.
ScalarField arc_length_labels(const ClosedCurve& curve);

/// Largest relative deviation of the metric from its mean value.
double metric_deviation(const ClosedCurve& curve);

/// Resamples the trigonometric interpolant of the curve at n uniform labels.
ClosedCurve resample(const ClosedCurve& curve, std::size_t n);

/// Signed offset (i − j) wrapped into (−N/2, N/2].
long periodic_offset(long i, long j, long n);

/// Discrete periodic maximal function of |f|.
///
/// The samples are treated as cell averages on N equal cells of one period. For
/// each node the centered windows covering cells j−m..j+m (half-width (m+½)h,
/// m = 0..2N−1, so every half-width stays below 2L) are averaged and the
/// maximum is kept. Window sums come from a periodic prefix-sum table, so the
/// cost is O(N²) time and O(N) memory; m = 0 makes 𝓜f ≥ |f| pointwise.
/// The period length cancels from the averages and is accepted for interface
/// symmetry with the continuum definition.
ScalarField periodic_maximal_function(std::span<const double> samples, double period);

/// sup over node pairs of |f_i − f_j| / d_ij^β, with d the periodic distance on a
/// uniform grid over `period`. Exhaustive O(N²); a lower bound for the continuum seminorm.
double holder_seminorm(std::span<const double> samples, double period, double beta);
double holder_seminorm(std::span<const Vec2> samples, double period, double beta);

/// Empirical Hölder exponent of a periodic vector field: log-log slope of
/// max_i |f_i − f_{i+k}| against k·h over log-spaced offsets k in [8, N/16]
/// (in [1, N/8] when N < 256). Returns 1 when the field is constant to rounding.
double empirical_holder_exponent(std::span<const Vec2> samples, double period);

/// Hölder and L^p(κ) summary of a curve in its arc-length parameterization.
NormReport curve_norms(const ClosedCurve& arc_length_curve, double beta, double p);

/// Discrete L^p norm (∑ |f|^p h)^{1/p} over a uniform grid; p = ∞ gives the max.
double lp_norm(std::span<const double> samples, double spacing, double p);

/// Empirical constants sup(LHS/RHS) for the arc-length estimates of W^{2,p}
/// curves, β = 1 − 1/p. Entries 0..4 are the pointwise bounds (a)–(e); 5..8 the
/// maximal-function bounds (a)–(d).
struct ArcLengthEstimateReport {
  static constexpr std::size_t kCount = 9;
  static const std::array<std::string_view, kCount> kIds;

  double p = 0.0;
  double beta = 0.0;
  std::array<double, kCount> constants{};
  /// Log-log slope of the pairwise LHS maximum against distance, over short distances.
  std::array<double, kCount> fitted_exponents{};
  std::array<double, kCount> predicted_exponents{};
};

/// Throws if the curve is not arc-length parameterized to 1e-6 relative.
ArcLengthEstimateReport verify_arc_length_estimates(const ClosedCurve& curve, double p);

}  // namespace alpha_patch
