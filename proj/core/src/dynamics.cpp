#include "alpha_patch/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "alpha_patch/spectral.hpp"

namespace alpha_patch {

FlowState make_flow_state(const ClosedCurve& curve, double time) {
  auto geo = geometry(curve);
  return FlowState{curve, std::move(geo.g), std::move(geo.T), time};
}

std::string_view to_string(StepScheme scheme) { return scheme == StepScheme::rk4 ? "rk4" : "euler"; }

StepScheme step_scheme_from_string(std::string_view name) {
  if (name == "rk4") return StepScheme::rk4;
  if (name == "euler") return StepScheme::euler;
  throw std::invalid_argument("unknown step scheme '" + std::string(name) + "'");
}

void StepperConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(cfl > 0.0)) throw std::invalid_argument("cfl must be positive");
  if (!(consistency_tol > 0.0)) throw std::invalid_argument("consistency_tol must be positive");
}

void SimulationConfig::validate() const {
  stepper.validate();
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be nonnegative");
  if (emit_every == 0) throw std::invalid_argument("emit_every must be at least 1");
}

FlowRates rhs(const FlowState& state, const KernelParams& params) {
  const auto geo = geometry(state.curve);
  const auto bv = boundary_velocity(state.curve, geo, params);
  const std::size_t n = state.curve.size();
  FlowRates r;
  r.dgamma = bv.v;
  r.dg.resize(n);
  r.dT.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 T = state.T_evolved[j];
    const Vec2 N = -perp(T);
    r.dg[j] = state.g_evolved[j] * dot(bv.dsv[j], T);
    r.dT[j] = N * dot(bv.dsv[j], N);
  }
  return r;
}

namespace {

// state + dt · rates
FlowState shifted(const FlowState& s, const FlowRates& r, double dt) {
  const std::size_t n = s.curve.size();
  VectorField nodes(n);
  ScalarField g(n);
  VectorField T(n);
  for (std::size_t j = 0; j < n; ++j) {
    nodes[j] = s.curve[j] + r.dgamma[j] * dt;
    g[j] = s.g_evolved[j] + r.dg[j] * dt;
    T[j] = s.T_evolved[j] + r.dT[j] * dt;
  }
  return FlowState{ClosedCurve::unchecked(std::move(nodes), s.curve.scheme()), std::move(g), std::move(T),
                   s.time + dt};
}

FlowState advance_from(const FlowState& s, double dt, StepScheme scheme, const KernelParams& params,
                       const FlowRates& k1) {
  if (scheme == StepScheme::euler) return shifted(s, k1, dt);
  const FlowRates k2 = rhs(shifted(s, k1, 0.5 * dt), params);
  const FlowRates k3 = rhs(shifted(s, k2, 0.5 * dt), params);
  const FlowRates k4 = rhs(shifted(s, k3, dt), params);
  const std::size_t n = s.curve.size();
  FlowRates avg;
  avg.dgamma.resize(n);
  avg.dg.resize(n);
  avg.dT.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    avg.dgamma[j] = (k1.dgamma[j] + 2.0 * k2.dgamma[j] + 2.0 * k3.dgamma[j] + k4.dgamma[j]) * (1.0 / 6.0);
    avg.dg[j] = (k1.dg[j] + 2.0 * k2.dg[j] + 2.0 * k3.dg[j] + k4.dg[j]) / 6.0;
    avg.dT[j] = (k1.dT[j] + 2.0 * k2.dT[j] + 2.0 * k3.dT[j] + k4.dT[j]) * (1.0 / 6.0);
  }
  return shifted(s, avg, dt);
}

// Arc-length relabelling that carries the evolved fields along: T is interpolated
// at the new labels, and g picks up the Jacobian of the label change.
FlowState reparameterize(const FlowState& s) {
  const std::size_t n = s.curve.size();
  const auto labels = arc_length_labels(s.curve);
  const auto geo = geometry(s.curve);
  const double length = total_length(s.curve);
  const spectral::CurveInterpolant nodes(s.curve.nodes());
  const spectral::CurveInterpolant tangent(s.T_evolved);
  const spectral::TrigInterpolant g_ev(s.g_evolved);
  const spectral::TrigInterpolant g_geo(geo.g);
  VectorField new_nodes(n), new_T(n);
  ScalarField new_g(n);
  for (std::size_t k = 0; k < n; ++k) {
    new_nodes[k] = k == 0 ? s.curve[0] : nodes.position(labels[k]);
    const Vec2 t = tangent.position(labels[k]);
    new_T[k] = t / norm(t);
    new_g[k] = g_ev.value(labels[k]) * (length / kTwoPi) / g_geo.value(labels[k]);
  }
  return FlowState{ClosedCurve::unchecked(std::move(new_nodes), s.curve.scheme()), std::move(new_g),
                   std::move(new_T), s.time};
}

}  // namespace

FlowState advance(const FlowState& state, double dt, StepScheme scheme, const KernelParams& params) {
  return advance_from(state, dt, scheme, params, rhs(state, params));
}

FlowState step(const FlowState& state, const StepperConfig& config, const KernelParams& params,
               std::size_t step_index) {
  config.validate();
  const FlowRates k1 = rhs(state, params);
  double vmax = 0.0;
  for (const auto& v : k1.dgamma) vmax = std::max(vmax, norm(v));
  const double spacing = min_node_spacing(state.curve.nodes());
  if (vmax > 0.0 && config.dt > config.cfl * spacing / vmax)
    throw CflViolation("dt = " + std::to_string(config.dt) + " exceeds the CFL limit " +
                       std::to_string(config.cfl * spacing / vmax));

  FlowState next = advance_from(state, config.dt, config.scheme, params, k1);
  if (config.tangent_projection)
    for (auto& t : next.T_evolved) t = t / norm(t);
  if (config.reparam_every > 0 && (step_index + 1) % config.reparam_every == 0) next = reparameterize(next);

  const double gmax = *std::max_element(next.g_evolved.begin(), next.g_evolved.end());
  const double residual = consistency_residual(next);
  if (!(residual <= 10.0 * config.consistency_tol * gmax))
    throw ConsistencyBlowup("consistency residual " + std::to_string(residual) + " exceeds 10x tolerance at t = " +
                            std::to_string(next.time));
  return next;
}

double consistency_residual(const FlowState& state) {
  const auto d1 = differentiate(state.curve, 1);
  double r = 0.0;
  for (std::size_t j = 0; j < d1.size(); ++j)
    r = std::max(r, norm(state.T_evolved[j] * state.g_evolved[j] - d1[j]));
  return r;
}

double tangent_norm_deviation(const FlowState& state) {
  double r = 0.0;
  for (const auto& t : state.T_evolved) r = std::max(r, std::abs(norm(t) - 1.0));
  return r;
}

Diagnostics diagnose(const FlowState& state) {
  const auto geo = geometry(state.curve);
  Diagnostics d;
  d.time = state.time;
  d.area = enclosed_area(state.curve);
  d.length = total_length(state.curve);
  d.min_spacing = min_node_spacing(state.curve.nodes());
  d.consistency_residual = consistency_residual(state);
  d.tangent_norm_dev = tangent_norm_deviation(state);
  d.holder_beta_hat = empirical_holder_exponent(geo.T, d.length);
  return d;
}

Trajectory run_simulation(const SimulationConfig& config, const ClosedCurve& initial, const KernelParams& params,
                          const EmitCallback& on_emit) {
  config.validate();
  Trajectory traj;
  auto emit = [&](const FlowState& s) {
    const Diagnostics d = diagnose(s);
    traj.snapshots.push_back(s);
    traj.diagnostics.push_back(d);
    if (on_emit) on_emit(s, d);
  };

  FlowState state = make_flow_state(initial, 0.0);
  emit(state);
  if (config.t_end == 0.0) return traj;

  const auto steps = static_cast<std::size_t>(std::ceil(config.t_end / config.stepper.dt - 1e-9));
  StepperConfig stepper = config.stepper;
  stepper.dt = config.t_end / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    try {
      state = step(state, stepper, params, k);
    } catch (const std::exception& e) {
      traj.aborted = true;
      traj.abort_reason = e.what();
      return traj;
    }
    // Clock from the step count, not accumulated increments.
    state.time = config.t_end * static_cast<double>(k + 1) / static_cast<double>(steps);
    const bool last = k + 1 == steps;
    if (last || (k + 1) % config.emit_every == 0) {
      if (config.check_simplicity && !is_simple_polygon(state.curve.nodes())) {
        traj.aborted = true;
        traj.abort_reason = "self-intersection detected at t = " + std::to_string(state.time);
        return traj;
      }
      emit(state);
    }
  }
  return traj;
}

}  // namespace alpha_patch
