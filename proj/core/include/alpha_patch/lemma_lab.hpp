#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alpha_patch/curve.hpp"
#include "alpha_patch/velocity.hpp"

namespace alpha_patch {

enum class CurveKind { circle, ellipse, star, rough_c1beta, w2p_spike };

std::string_view to_string(CurveKind kind);
CurveKind curve_kind_from_string(std::string_view name);

struct TestCurveParams {
  std::size_t n = 256;
  DiffScheme scheme = DiffScheme::spectral;
  double radius = 1.0;                   // circle
  double a = 2.0, b = 1.0;               // ellipse semi-axes
  int lobes = 5;                         // star: r = 1 + amp cos(lobes θ)
  double amp = 0.3;                      // star amplitude
  double beta0 = 0.5;                    // rough_c1beta tangent exponent
  double rough_amp = 0.2;                // rough_c1beta amplitude
  std::uint64_t seed = 7;                // rough_c1beta phases
  double lacunarity = 2.0;               // rough_c1beta frequency ratio (> 1)
  double p0 = 4.0;                       // w2p_spike integrability exponent
  double strength = 1.0;                 // w2p_spike amplitude factor
};

/// Sampled test curves at the uniform labels θ_j = 2πj/N (radial graphs about the
/// origin, except the ellipse (a cos θ, b sin θ)).
///
/// rough_c1beta: r = 1 + amp Σ_k f_k^{−(1+β₀)} cos(f_k θ + φ_k) over the distinct
/// frequencies f_k = round(q^k) in [2, N/8], q the lacunarity; a lacunary sum whose
/// tangent is Hölder of order β₀ down to the grid scale.
/// w2p_spike: r = 1 + 0.1·strength·|2 sin(θ/2)|^{2−a} with a = 1/p₀ − 0.01, so that
/// κ ~ |θ|^{−a} lies in L^{p₀} but not in L^∞.
/// Throws std::invalid_argument for self-intersecting or invalid output.
ClosedCurve generate_test_curve(CurveKind kind, const TestCurveParams& params);

struct EstimateReport {
  std::string estimate_id;
  double alpha = 0.0;
  double beta_or_p = 0.0;
  double fitted_exponent = 0.0;
  double predicted_exponent = 0.0;
  double empirical_constant = 0.0;
  /// |C(2N) − C(N)| / C(N) for the empirical constant; 0 when both vanish to
  /// rounding, NaN when refinement was not requested.
  double refinement_stability = 0.0;
  /// RMS residual of the log-log fit.
  double fit_residual = 0.0;
  /// Full-vector exponent, reported alongside the tangential one.
  std::optional<double> contrast_exponent;
  /// False when the curve is outside the estimate's hypothesis (the run proceeds).
  bool in_hypothesis = true;
  /// Fit residual above 0.05: the δ-range may not be asymptotic.
  bool flagged = false;
};

/// Default δ grid: 12 log-spaced grid multiples m·h in [8h, L/16] (distinct m).
std::vector<long> default_delta_offsets(std::size_t n);

struct HolderOptions {
  /// Offsets (in nodes) of the δ grid; empty selects default_delta_offsets.
  std::vector<long> delta_offsets;
  /// Number of evenly spaced base points for sup_s |Δ_δ f(s)|.
  std::size_t base_points = 32;
  /// Also evaluate on the 2N resampling to report refinement_stability.
  bool refine = true;
};

/// Δ_δ[∂ₛv] regression on an arc-length curve; predicted exponent β − 2α with
/// β the supplied regularity of T. Throws for fewer than two δ values or δ < 4h.
EstimateReport verify_dsv_holder(const ClosedCurve& curve, const KernelParams& params, double beta,
                                 const HolderOptions& options = {});

/// Δ_δ[∂ₛv·T] regression; predicted exponent 1 − 1/p. The report also carries the
/// full-vector exponent on the same δ grid. p ≤ 1/(1−2α) is flagged, not rejected.
EstimateReport verify_dsvT_holder(const ClosedCurve& curve, const KernelParams& params, double p,
                                  const HolderOptions& options = {});

struct SplitResult {
  double I1 = 0.0;
  double I2 = 0.0;
  double bound_ratio_1 = 0.0;  // |I1| / δ^{1−1/p}
  double bound_ratio_2 = 0.0;
  /// Δ_δ[∂ₛv·T](s) from the full production field, for the reconstruction check.
  double delta_dsvT = 0.0;
};

/// Near/far split of Δ_δ[∂ₛv·T] at node `s_index` with δ = m·h: I₁ collects the
/// windows |s'| ≤ 2δ around s and s + δ (each with its own singular correction),
/// I₂ the finite difference of the integrand over |s'| > 2δ.
/// Requires 4 ≤ m and m·h ≤ L/8.
SplitResult split_I1_I2(const ClosedCurve& curve, const KernelParams& params, std::size_t s_index, long m,
                        double p);

/// sup over nodes of |PV∫ a(y)K(y,x)dy| + |PV∫ a(x)K(y,x)dx|, divided by the
/// Hölder norm sup|a| + [a]_β (label variable). a ≡ 0 gives 0.
EstimateReport verify_kernel_lemma(const ClosedCurve& curve, const KernelParams& params,
                                   std::span<const double> a_field, double beta, bool refine = true);

/// Stable identifiers of the estimate suite, in CSV order.
const std::vector<std::string>& estimate_ids();

/// Ids selected by a comma-separated list of ids or id prefixes ("L2.2" selects
/// every L2.2-* entry). Throws std::invalid_argument naming an unknown token.
std::vector<std::string> select_estimates(std::string_view list);

struct SuiteOptions {
  double p = 4.0;     // Sobolev exponent for L2.2 and L4.2
  double beta = 1.0;  // Hölder exponent for L3.2 and L5.1
  HolderOptions holder;
};

/// Runs the selected estimates on one arc-length curve.
std::vector<EstimateReport> run_estimate_suite(const ClosedCurve& curve, const KernelParams& params,
                                               std::span<const std::string> ids, const SuiteOptions& options);

}  // namespace alpha_patch
