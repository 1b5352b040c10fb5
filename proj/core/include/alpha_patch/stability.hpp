#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alpha_patch/dynamics.hpp"

namespace alpha_patch {

struct DeltaComponents {
  double delta = 0.0;
  double delta_gamma = 0.0;
  double delta_g = 0.0;
  double delta_T = 0.0;
};

/// Squared L² distances over the Lagrangian label (trapezoid weights 2π/N) between
/// the positions, metrics and tangents of two states, and their sum.
/// Throws std::invalid_argument on different N or different times.
DeltaComponents delta(const FlowState& a, const FlowState& b);

enum class PerturbationKind { normal_bump, fourier_mode, label_shift };

std::string_view to_string(PerturbationKind kind);
PerturbationKind perturbation_kind_from_string(std::string_view name);

struct TwinConfig {
  PerturbationKind kind = PerturbationKind::fourier_mode;
  double epsilon = 1e-3;
  /// Angular frequency of the fourier-mode perturbation.
  int mode = 3;
  SimulationConfig simulation;
  KernelParams params{0.2};
};

struct StabilityReport {
  std::vector<double> times;
  std::vector<double> delta;
  std::vector<double> delta_gamma;
  std::vector<double> delta_g;
  std::vector<double> delta_T;
  double fitted_C = 0.0;
  double fit_residual = 0.0;
  /// False when δ vanished somewhere (identical twins) or fewer than two samples.
  bool fitted = false;
  /// δ(t) ≤ δ(0) exp(C' t) at every sample, with C' = C + 0.1|C|.
  bool holds_pointwise = false;
  /// One twin aborted; the series ends at the last common time.
  bool truncated = false;
  /// Label-shift twins start from different parameterizations of one image, which
  /// is outside the hypothesis of the stability estimate.
  bool in_hypothesis = true;
  std::string note;
};

/// The two initial curves of a twin experiment. The base curve is reparameterized
/// by arc length; normal perturbations are applied to it and reparameterized again.
/// A label shift moves the labels by ε along the interpolant instead.
std::pair<ClosedCurve, ClosedCurve> twin_initial_curves(const TwinConfig& config, const ClosedCurve& base);

StabilityReport run_twin(const TwinConfig& config, const ClosedCurve& base);

struct GronwallFit {
  double C = 0.0;
  double residual = 0.0;
};

/// Least-squares slope of log δ against t; the residual is the RMS misfit in log δ.
/// Throws std::invalid_argument for fewer than two samples or any δ ≤ 0.
GronwallFit fit_gronwall_constant(std::span<const double> times, std::span<const double> delta);
GronwallFit fit_gronwall_constant(const StabilityReport& report);

/// True if δ(t_i) ≤ δ(0) exp((C + 0.1|C|) t_i) for every sample (with a relative
/// slack of 1e-12 for rounding).
bool gronwall_holds_pointwise(std::span<const double> times, std::span<const double> delta, double C);

/// sup over node pairs of |K₁(y,x) − K₂(y,x)| / (|x−y|^{−1−2α} (𝓜Δg(z) + 𝓜ΔT(z)))
/// with z the periodic midpoint of x and y (rounded down to a node) and |x−y| the
/// label distance. Kernels use each state's evolved g and T. O(N²).
double kernel_difference_bound_check(const FlowState& a, const FlowState& b, const KernelParams& params);

}  // namespace alpha_patch
