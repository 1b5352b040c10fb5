#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "alpha_patch/curve.hpp"
#include "alpha_patch/velocity.hpp"

namespace alpha_patch {

/// Boundary curve together with the metric and tangent fields integrated by their
/// own evolution equations rather than recomputed from the nodes.
struct FlowState {
  ClosedCurve curve;
  ScalarField g_evolved;
  VectorField T_evolved;
  double time = 0.0;
};

/// Initial state: g and T taken from the curve's geometry.
FlowState make_flow_state(const ClosedCurve& curve, double time = 0.0);

enum class StepScheme { rk4, euler };

std::string_view to_string(StepScheme scheme);
StepScheme step_scheme_from_string(std::string_view name);

struct StepperConfig {
  double dt = 1e-3;
  StepScheme scheme = StepScheme::rk4;
  /// Arc-length reparameterization cadence in steps; 0 keeps the Lagrangian labels.
  std::size_t reparam_every = 0;
  /// Renormalize T after each step.
  bool tangent_projection = true;
  /// dt must not exceed cfl · (min node spacing) / max|v|.
  double cfl = 0.5;
  /// Allowed consistency residual as a fraction of max g; a step aborts at 10×.
  double consistency_tol = 1e-4;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct FlowRates {
  VectorField dgamma;
  ScalarField dg;
  VectorField dT;
};

class CflViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConsistencyBlowup : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// dγ/dt = v, dg/dt = g(∂ₛv·T), dT/dt = (∂ₛv·N)N. The kernels see the geometry of
/// the current nodes; the factors g, T, N are the evolved fields.
FlowRates rhs(const FlowState& state, const KernelParams& params);

/// One step of size dt (either sign) with no CFL guard, projection or
/// reparameterization. Used for reversibility checks and as the core of step().
FlowState advance(const FlowState& state, double dt, StepScheme scheme, const KernelParams& params);

/// One guarded step. `step_index` is the zero-based counter used for the
/// reparameterization cadence. Throws CflViolation or ConsistencyBlowup.
FlowState step(const FlowState& state, const StepperConfig& config, const KernelParams& params,
               std::size_t step_index = 0);

/// max_j |g_j T_j − ∂ₓγ(x_j)|.
double consistency_residual(const FlowState& state);

/// max_j ||T_j| − 1|.
double tangent_norm_deviation(const FlowState& state);

struct Diagnostics {
  double time = 0.0;
  double area = 0.0;
  double length = 0.0;
  double min_spacing = 0.0;
  double consistency_residual = 0.0;
  double tangent_norm_dev = 0.0;
  double holder_beta_hat = 0.0;
};

Diagnostics diagnose(const FlowState& state);

struct SimulationConfig {
  StepperConfig stepper;
  double t_end = 1.0;
  /// Emit a snapshot every this many steps (the final state is always emitted).
  std::size_t emit_every = 1;
  /// Check the node polygon for self-intersections at every emission.
  bool check_simplicity = false;

  void validate() const;
};

struct Trajectory {
  std::vector<FlowState> snapshots;
  std::vector<Diagnostics> diagnostics;
  bool aborted = false;
  std::string abort_reason;
};

using EmitCallback = std::function<void(const FlowState&, const Diagnostics&)>;

/// Integrates to t_end with ⌈t_end/dt⌉ equal steps of size ≤ dt. A step failure
/// (CFL, consistency blowup, self-intersection) ends the run with `aborted` set;
/// everything emitted so far is kept. `on_emit` sees every emission as it happens.
Trajectory run_simulation(const SimulationConfig& config, const ClosedCurve& initial, const KernelParams& params,
                          const EmitCallback& on_emit = {});

}  // namespace alpha_patch
