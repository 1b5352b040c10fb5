#include "run_config.hpp"

#include <cmath>
#include <stdexcept>
#include <variant>

#include <json.hpp>

#include <alpha_patch/io.hpp>

namespace alpha_patch::cli {

std::string_view to_string(Command command) {
  switch (command) {
    case Command::simulate:
      return "simulate";
    case Command::twin:
      return "twin";
    case Command::verify:
      return "verify";
    case Command::convergence:
      return "convergence";
  }
  return "simulate";
}

namespace {

using Member = std::variant<std::optional<double> RunConfig::*, double RunConfig::*, std::size_t RunConfig::*,
                            int RunConfig::*, bool RunConfig::*, std::string RunConfig::*>;

struct Field {
  const char* name;
  Member member;
};

// The seed goes through the size_t alternative.
static_assert(std::is_same_v<std::size_t, std::uint64_t>);

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      {"alpha", &RunConfig::alpha},
      {"n_nodes", &RunConfig::n_nodes},
      {"dt", &RunConfig::dt},
      {"t_end", &RunConfig::t_end},
      {"output_dir", &RunConfig::output_dir},
      {"seed", &RunConfig::seed},
      {"diff_scheme", &RunConfig::diff_scheme},
      {"emit_every", &RunConfig::emit_every},
      {"curve", &RunConfig::curve},
      {"curve_file", &RunConfig::curve_file},
      {"radius", &RunConfig::radius},
      {"a", &RunConfig::a},
      {"b", &RunConfig::b},
      {"lobes", &RunConfig::lobes},
      {"amp", &RunConfig::amp},
      {"beta0", &RunConfig::beta0},
      {"rough_amp", &RunConfig::rough_amp},
      {"lacunarity", &RunConfig::lacunarity},
      {"p0", &RunConfig::p0},
      {"strength", &RunConfig::strength},
      {"step_scheme", &RunConfig::step_scheme},
      {"reparam_every", &RunConfig::reparam_every},
      {"tangent_projection", &RunConfig::tangent_projection},
      {"cfl", &RunConfig::cfl},
      {"consistency_tol", &RunConfig::consistency_tol},
      {"check_simplicity", &RunConfig::check_simplicity},
      {"perturbation", &RunConfig::perturbation},
      {"epsilon", &RunConfig::epsilon},
      {"mode", &RunConfig::mode},
      {"estimates", &RunConfig::estimates},
      {"p", &RunConfig::p},
      {"beta", &RunConfig::beta},
      {"base_points", &RunConfig::base_points},
      {"refine", &RunConfig::refine},
      {"stability_threshold", &RunConfig::stability_threshold},
      {"levels", &RunConfig::levels},
  };
  return f;
}

[[noreturn]] void bad_type(const std::string& key, const char* expected) {
  throw std::invalid_argument(key + ": expected " + expected);
}

void assign(RunConfig& c, const Field& f, const nlohmann::json& v) {
  const std::string key = f.name;
  std::visit(
      [&](auto member) {
        using T = std::remove_reference_t<decltype(c.*member)>;
        if constexpr (std::is_same_v<T, std::optional<double>> || std::is_same_v<T, double>) {
          if (!v.is_number()) bad_type(key, "a number");
          c.*member = v.get<double>();
        } else if constexpr (std::is_same_v<T, bool>) {
          if (!v.is_boolean()) bad_type(key, "true or false");
          c.*member = v.get<bool>();
        } else if constexpr (std::is_same_v<T, int>) {
          if (!v.is_number_integer()) bad_type(key, "an integer");
          c.*member = v.get<int>();
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (!v.is_string()) bad_type(key, "a string");
          c.*member = v.get<std::string>();
        } else {
          if (!v.is_number_unsigned()) bad_type(key, "a nonnegative integer");
          c.*member = v.get<T>();
        }
      },
      f.member);
}

[[noreturn]] void fail(const char* field, const std::string& why) { throw std::invalid_argument(std::string(field) + ": " + why); }

}  // namespace

void apply_json(RunConfig& config, std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config: expected a flat JSON object");
  for (const auto& [key, value] : doc.items()) {
    const Field* match = nullptr;
    for (const auto& f : fields())
      if (key == f.name) match = &f;
    if (!match) throw std::invalid_argument(key + ": unknown config field");
    assign(config, *match, value);
  }
}

void validate(const RunConfig& c, Command command) {
  if (!c.alpha) fail("alpha", "required (0 < alpha < 0.5)");
  if (!(*c.alpha > 0.0 && *c.alpha < 0.5)) fail("alpha", "must lie in (0, 0.5)");
  if (c.n_nodes < 16) fail("n_nodes", "must be at least 16");
  if (command == Command::verify && c.n_nodes < 128) fail("n_nodes", "verify needs at least 128 nodes");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) fail("dt", "must be positive");
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) fail("t_end", "must be nonnegative");
  if (command == Command::convergence && !(c.t_end > 0.0)) fail("t_end", "must be positive");
  if (c.output_dir.empty()) fail("output_dir", "must not be empty");
  if (c.emit_every == 0) fail("emit_every", "must be at least 1");
  try {
    (void)diff_scheme_from_string(c.diff_scheme);
  } catch (const std::invalid_argument&) {
    fail("diff_scheme", "must be spectral or fd4");
  }
  if (c.curve_file.empty()) {
    CurveKind kind{};
    try {
      kind = curve_kind_from_string(c.curve);
    } catch (const std::invalid_argument&) {
      fail("curve", "must be one of circle, ellipse, star, rough_c1beta, w2p_spike");
    }
    switch (kind) {
      case CurveKind::circle:
        if (!(c.radius > 0.0)) fail("radius", "must be positive");
        break;
      case CurveKind::ellipse:
        if (!(c.a > 0.0)) fail("a", "must be positive");
        if (!(c.b > 0.0)) fail("b", "must be positive");
        break;
      case CurveKind::star:
        if (c.lobes < 1) fail("lobes", "must be at least 1");
        if (!(std::abs(c.amp) < 1.0)) fail("amp", "must satisfy |amp| < 1");
        break;
      case CurveKind::rough_c1beta:
        if (!(c.beta0 > 0.0 && c.beta0 < 1.0)) fail("beta0", "must lie in (0, 1)");
        if (!(c.lacunarity > 1.0)) fail("lacunarity", "must exceed 1");
        if (!std::isfinite(c.rough_amp)) fail("rough_amp", "must be finite");
        break;
      case CurveKind::w2p_spike:
        if (!(c.p0 > 1.0 && c.p0 < 100.0)) fail("p0", "must lie in (1, 100)");
        if (!std::isfinite(c.strength)) fail("strength", "must be finite");
        break;
    }
  }
  try {
    (void)step_scheme_from_string(c.step_scheme);
  } catch (const std::invalid_argument&) {
    fail("step_scheme", "must be rk4 or euler");
  }
  if (!(c.cfl > 0.0)) fail("cfl", "must be positive");
  if (!(c.consistency_tol > 0.0)) fail("consistency_tol", "must be positive");

  if (command == Command::twin) {
    try {
      (void)perturbation_kind_from_string(c.perturbation);
    } catch (const std::invalid_argument&) {
      fail("perturbation", "must be normal-bump, fourier-mode or label-shift");
    }
    if (!(c.epsilon >= 0.0) || !std::isfinite(c.epsilon)) fail("epsilon", "must be nonnegative");
    if (c.t_end == 0.0) fail("t_end", "a twin run needs t_end > 0");
  }
  if (command == Command::verify) {
    try {
      if (!c.estimates.empty()) (void)select_estimates(c.estimates);
    } catch (const std::invalid_argument& e) {
      fail("estimates", e.what());
    }
    if (!(c.p > 1.0)) fail("p", "must exceed 1");
    if (!(c.beta > 0.0 && c.beta <= 1.0)) fail("beta", "must lie in (0, 1]");
    if (c.base_points == 0) fail("base_points", "must be at least 1");
    if (!(c.stability_threshold > 0.0)) fail("stability_threshold", "must be positive");
  }
  if (command == Command::convergence && c.levels < 2) fail("levels", "need at least 2 resolutions");
}

TestCurveParams curve_params(const RunConfig& c, std::size_t n) {
  TestCurveParams p;
  p.n = n;
  p.scheme = diff_scheme_from_string(c.diff_scheme);
  p.radius = c.radius;
  p.a = c.a;
  p.b = c.b;
  p.lobes = c.lobes;
  p.amp = c.amp;
  p.beta0 = c.beta0;
  p.rough_amp = c.rough_amp;
  p.lacunarity = c.lacunarity;
  p.seed = c.seed;
  p.p0 = c.p0;
  p.strength = c.strength;
  return p;
}

ClosedCurve initial_curve(const RunConfig& c, std::size_t n) {
  if (!c.curve_file.empty()) {
    ClosedCurve curve = io::read_snapshot(c.curve_file).state.curve;
    if (curve.size() == n) return curve;
    return resample(curve, n);
  }
  return generate_test_curve(curve_kind_from_string(c.curve), curve_params(c, n));
}

SimulationConfig simulation_config(const RunConfig& c) {
  SimulationConfig s;
  s.stepper.dt = c.dt;
  s.stepper.scheme = step_scheme_from_string(c.step_scheme);
  s.stepper.reparam_every = c.reparam_every;
  s.stepper.tangent_projection = c.tangent_projection;
  s.stepper.cfl = c.cfl;
  s.stepper.consistency_tol = c.consistency_tol;
  s.t_end = c.t_end;
  s.emit_every = c.emit_every;
  s.check_simplicity = c.check_simplicity;
  return s;
}

TwinConfig twin_config(const RunConfig& c) {
  TwinConfig t{perturbation_kind_from_string(c.perturbation), c.epsilon, c.mode, simulation_config(c),
               KernelParams(*c.alpha)};
  return t;
}

SuiteOptions suite_options(const RunConfig& c) {
  SuiteOptions o;
  o.p = c.p;
  o.beta = c.beta;
  o.holder.base_points = c.base_points;
  o.holder.refine = c.refine;
  return o;
}

ConvergenceConfig convergence_config(const RunConfig& c) {
  ConvergenceConfig cc;
  cc.n0 = c.n_nodes;
  cc.dt0 = c.dt;
  cc.t_end = c.t_end;
  cc.levels = c.levels;
  cc.stepper = simulation_config(c).stepper;
  return cc;
}

}  // namespace alpha_patch::cli
