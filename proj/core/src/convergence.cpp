#include "alpha_patch/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace alpha_patch {

void ConvergenceConfig::validate() const {
  if (levels < 2) throw std::invalid_argument("levels must be at least 2");
  if (n0 < 16) throw std::invalid_argument("n must be at least 16");
  if (!(dt0 > 0.0) || !std::isfinite(dt0)) throw std::invalid_argument("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
  stepper.validate();
}

namespace {

std::optional<double> observed_order(double coarse, double fine) {
  if (coarse <= kRoundingFloor && fine <= kRoundingFloor) return std::nullopt;
  if (fine <= 0.0) return std::nullopt;
  return std::log2(coarse / fine);
}

}  // namespace

ConvergenceStudy run_convergence(const ConvergenceConfig& config,
                                 const std::function<ClosedCurve(std::size_t)>& make_curve,
                                 const KernelParams& params) {
  config.validate();
  ConvergenceStudy study;
  for (std::size_t k = 0; k < config.levels; ++k) {
    ConvergenceLevel lvl;
    lvl.n = config.n0 << k;
    lvl.dt = config.dt0 / static_cast<double>(std::size_t{1} << k);
    const ClosedCurve curve = make_curve(lvl.n);

    const auto v = velocity_on_boundary(curve, params);
    for (std::size_t p = 0; p < 8; ++p) {
      const std::size_t node = p * lvl.n / 8;
      const Vec2 ref = oracle_velocity(curve, params, node);
      lvl.velocity_error = std::max(lvl.velocity_error, norm(v[node] - ref) / norm(ref));
    }

    SimulationConfig sim;
    sim.stepper = config.stepper;
    sim.stepper.dt = lvl.dt;
    sim.t_end = config.t_end;
    sim.emit_every = std::numeric_limits<std::size_t>::max();
    const Trajectory traj = run_simulation(sim, curve, params);
    const auto& first = traj.diagnostics.front();
    const auto& last = traj.diagnostics.back();
    lvl.aborted = traj.aborted;
    lvl.area_drift = std::abs(last.area - first.area) / std::abs(first.area);
    lvl.consistency_residual = last.consistency_residual;

    if (!study.levels.empty()) {
      const auto& prev = study.levels.back();
      lvl.velocity_order = observed_order(prev.velocity_error, lvl.velocity_error);
      lvl.area_order = observed_order(prev.area_drift, lvl.area_drift);
      lvl.consistency_order = observed_order(prev.consistency_residual, lvl.consistency_residual);
    }
    study.levels.push_back(lvl);
  }
  return study;
}

}  // namespace alpha_patch
