#include "alpha_patch/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "alpha_patch/fit.hpp"
#include "alpha_patch/parallel.hpp"
#include "alpha_patch/spectral.hpp"

namespace alpha_patch {

DeltaComponents delta(const FlowState& a, const FlowState& b) {
  const std::size_t n = a.curve.size();
  if (b.curve.size() != n) throw std::invalid_argument("delta: states have different node counts");
  if (std::abs(a.time - b.time) > 1e-12 * std::max(1.0, std::abs(a.time)))
    throw std::invalid_argument("delta: states are at different times");
  const double h = kTwoPi / static_cast<double>(n);
  DeltaComponents d;
  for (std::size_t j = 0; j < n; ++j) {
    d.delta_gamma += norm2(a.curve[j] - b.curve[j]);
    const double dg = a.g_evolved[j] - b.g_evolved[j];
    d.delta_g += dg * dg;
    d.delta_T += norm2(a.T_evolved[j] - b.T_evolved[j]);
  }
  d.delta_gamma *= h;
  d.delta_g *= h;
  d.delta_T *= h;
  d.delta = d.delta_gamma + d.delta_g + d.delta_T;
  return d;
}

std::string_view to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::normal_bump:
      return "normal-bump";
    case PerturbationKind::fourier_mode:
      return "fourier-mode";
    case PerturbationKind::label_shift:
      return "label-shift";
  }
  return "fourier-mode";
}

PerturbationKind perturbation_kind_from_string(std::string_view name) {
  if (name == "normal-bump") return PerturbationKind::normal_bump;
  if (name == "fourier-mode") return PerturbationKind::fourier_mode;
  if (name == "label-shift") return PerturbationKind::label_shift;
  throw std::invalid_argument("unknown perturbation kind '" + std::string(name) + "'");
}

std::pair<ClosedCurve, ClosedCurve> twin_initial_curves(const TwinConfig& config, const ClosedCurve& base) {
  if (!(config.epsilon >= 0.0) || !std::isfinite(config.epsilon))
    throw std::invalid_argument("epsilon must be nonnegative");
  ClosedCurve first = arc_length_reparameterize(base);
  if (config.epsilon == 0.0) return {first, first};

  const std::size_t n = first.size();
  const double h = first.label_spacing();
  VectorField nodes(n);
  if (config.kind == PerturbationKind::label_shift) {
    const spectral::CurveInterpolant interp(first.nodes());
    for (std::size_t j = 0; j < n; ++j) nodes[j] = interp.position(h * static_cast<double>(j) + config.epsilon);
    return {first, ClosedCurve::create(std::move(nodes), first.scheme())};
  }

  const auto geo = geometry(first);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = h * static_cast<double>(j);
    double amp = 0.0;
    if (config.kind == PerturbationKind::fourier_mode) {
      amp = std::cos(config.mode * x);
    } else {
      const double u = (x - kPi) / 0.3;
      amp = std::exp(-u * u);
    }
    nodes[j] = first[j] + geo.Nrm[j] * (config.epsilon * amp);
  }
  ClosedCurve second = ClosedCurve::create(std::move(nodes), first.scheme());
  return {first, arc_length_reparameterize(second)};
}

GronwallFit fit_gronwall_constant(std::span<const double> times, std::span<const double> delta) {
  if (times.size() != delta.size()) throw std::invalid_argument("fit_gronwall_constant: size mismatch");
  if (times.size() < 2) throw std::invalid_argument("fit_gronwall_constant: need at least two samples");
  std::vector<double> logs(delta.size());
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (!(delta[i] > 0.0)) throw std::invalid_argument("fit_gronwall_constant: delta vanishes in the window");
    logs[i] = std::log(delta[i]);
  }
  const LineFit f = fit_line(times, logs);
  return {f.slope, f.rms};
}

GronwallFit fit_gronwall_constant(const StabilityReport& report) {
  return fit_gronwall_constant(report.times, report.delta);
}

bool gronwall_holds_pointwise(std::span<const double> times, std::span<const double> delta, double C) {
  if (times.empty()) return true;
  const double rate = C + 0.1 * std::abs(C);
  for (std::size_t i = 0; i < times.size(); ++i)
    if (delta[i] > delta[0] * std::exp(rate * (times[i] - times[0])) * (1.0 + 1e-12)) return false;
  return true;
}

StabilityReport run_twin(const TwinConfig& config, const ClosedCurve& base) {
  config.simulation.validate();
  const auto [first, second] = twin_initial_curves(config, base);
  const Trajectory a = run_simulation(config.simulation, first, config.params);
  const Trajectory b = run_simulation(config.simulation, second, config.params);

  StabilityReport rep;
  rep.in_hypothesis = config.kind != PerturbationKind::label_shift;
  if (!rep.in_hypothesis) rep.note = "label-shift twins differ in parameterization; outside the stability hypothesis";
  const std::size_t common = std::min(a.snapshots.size(), b.snapshots.size());
  rep.truncated = a.aborted || b.aborted;
  if (rep.truncated) {
    if (!rep.note.empty()) rep.note += "; ";
    rep.note += "twin aborted: " + (a.aborted ? a.abort_reason : b.abort_reason);
  }
  for (std::size_t k = 0; k < common; ++k) {
    const DeltaComponents d = delta(a.snapshots[k], b.snapshots[k]);
    rep.times.push_back(a.snapshots[k].time);
    rep.delta.push_back(d.delta);
    rep.delta_gamma.push_back(d.delta_gamma);
    rep.delta_g.push_back(d.delta_g);
    rep.delta_T.push_back(d.delta_T);
  }
  const bool positive = std::all_of(rep.delta.begin(), rep.delta.end(), [](double v) { return v > 0.0; });
  if (positive && rep.times.size() >= 2) {
    const GronwallFit fit = fit_gronwall_constant(rep);
    rep.fitted = true;
    rep.fitted_C = fit.C;
    rep.fit_residual = fit.residual;
    rep.holds_pointwise = gronwall_holds_pointwise(rep.times, rep.delta, fit.C);
  } else {
    // Identical twins: the bound holds trivially when δ never leaves zero.
    rep.holds_pointwise = std::all_of(rep.delta.begin(), rep.delta.end(), [](double v) { return v == 0.0; });
  }
  return rep;
}

double kernel_difference_bound_check(const FlowState& a, const FlowState& b, const KernelParams& params) {
  const std::size_t n = a.curve.size();
  if (b.curve.size() != n) throw std::invalid_argument("kernel_difference_bound_check: node counts differ");
  for (std::size_t j = 0; j < n; ++j)
    if (!(a.g_evolved[j] > 1e-10) || !(b.g_evolved[j] > 1e-10))
      throw std::invalid_argument("kernel_difference_bound_check: degenerate metric");

  ScalarField dg(n), dT(n);
  for (std::size_t j = 0; j < n; ++j) {
    dg[j] = a.g_evolved[j] - b.g_evolved[j];
    dT[j] = norm(a.T_evolved[j] - b.T_evolved[j]);
  }
  const auto Mg = periodic_maximal_function(dg, kTwoPi);
  const auto MT = periodic_maximal_function(dT, kTwoPi);
  const double h = kTwoPi / static_cast<double>(n);
  const double expo = -1.0 - params.singular_exponent();
  const long ln = static_cast<long>(n);

  std::vector<double> row_sup(n, 0.0);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {  // x = label i
      double best = 0.0;
      for (std::size_t j = 0; j < n; ++j) {  // y = label j
        if (j == i) continue;
        const double ka = kernel_K(a.curve[j], a.g_evolved[j], a.curve[i], a.T_evolved[i], params);
        const double kb = kernel_K(b.curve[j], b.g_evolved[j], b.curve[i], b.T_evolved[i], params);
        const double lhs = std::abs(ka - kb);
        const long off = periodic_offset(static_cast<long>(j), static_cast<long>(i), ln);
        const long z = ((static_cast<long>(i) + off / 2) % ln + ln) % ln;
        const double rhs = std::pow(std::abs(static_cast<double>(off)) * h, expo) * (Mg[z] + MT[z]);
        if (rhs > 0.0) {
          best = std::max(best, lhs / rhs);
        } else if (lhs > 0.0) {
          best = std::numeric_limits<double>::infinity();
        }
      }
      row_sup[i] = best;
    }
  });
  return *std::max_element(row_sup.begin(), row_sup.end());
}

}  // namespace alpha_patch
