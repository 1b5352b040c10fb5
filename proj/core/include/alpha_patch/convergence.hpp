#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "alpha_patch/dynamics.hpp"

namespace alpha_patch {

struct ConvergenceConfig {
  std::size_t n0 = 64;
  double dt0 = 4e-3;
  double t_end = 0.25;
  /// Resolution levels: level k uses N = n0·2^k and dt = dt0/2^k.
  std::size_t levels = 3;
  StepperConfig stepper;

  void validate() const;
};

struct ConvergenceLevel {
  std::size_t n = 0;
  double dt = 0.0;
  /// Max relative error of the boundary velocity against the oracle at 8 nodes.
  double velocity_error = 0.0;
  /// |A(t_end) − A(0)| / A(0)
  double area_drift = 0.0;
  double consistency_residual = 0.0;
  /// Observed orders log2(e_{k−1}/e_k) against the previous level; empty on the first
  /// level and when both errors are at the rounding floor.
  std::optional<double> velocity_order;
  std::optional<double> area_order;
  std::optional<double> consistency_order;
  bool aborted = false;
};

struct ConvergenceStudy {
  std::vector<ConvergenceLevel> levels;
};

/// Errors at or below this are treated as rounding, for which no order is reported.
inline constexpr double kRoundingFloor = 1e-12;

/// Runs the scenario at every level. `make_curve(n)` builds the initial curve with
/// n nodes. Throws std::invalid_argument for fewer than two levels.
ConvergenceStudy run_convergence(const ConvergenceConfig& config,
                                 const std::function<ClosedCurve(std::size_t)>& make_curve,
                                 const KernelParams& params);

}  // namespace alpha_patch
