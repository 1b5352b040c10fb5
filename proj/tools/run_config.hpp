#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <alpha_patch/convergence.hpp>
#include <alpha_patch/lemma_lab.hpp>
#include <alpha_patch/stability.hpp>

namespace alpha_patch::cli {

enum class Command { simulate, twin, verify, convergence };

std::string_view to_string(Command command);

/// Every setting of every subcommand. Keys of the flat JSON config file are the
/// member names; command-line flags use the same names with '-' for '_'.
struct RunConfig {
  // common
  std::optional<double> alpha;
  std::size_t n_nodes = 256;
  double dt = 1e-3;
  double t_end = 1.0;
  std::string output_dir = "alpha_patch_out";
  std::uint64_t seed = 7;
  std::string diff_scheme = "spectral";
  std::size_t emit_every = 1;

  // initial curve
  std::string curve = "circle";
  std::string curve_file;
  double radius = 1.0;
  double a = 2.0;
  double b = 1.0;
  int lobes = 5;
  double amp = 0.3;
  double beta0 = 0.5;
  double rough_amp = 0.2;
  double lacunarity = 2.0;
  double p0 = 4.0;
  double strength = 1.0;

  // stepping
  std::string step_scheme = "rk4";
  std::size_t reparam_every = 0;
  bool tangent_projection = true;
  double cfl = 0.5;
  double consistency_tol = 1e-4;
  bool check_simplicity = true;

  // twin
  std::string perturbation = "fourier-mode";
  double epsilon = 1e-3;
  int mode = 3;

  // verify
  std::string estimates;
  double p = 4.0;
  double beta = 1.0;
  std::size_t base_points = 32;
  bool refine = true;
  double stability_threshold = 0.15;

  // convergence
  std::size_t levels = 3;
};

/// Overlays the keys of a flat JSON object onto `config`. Throws
/// std::invalid_argument naming an unknown key or a value of the wrong type.
void apply_json(RunConfig& config, std::string_view json_text);

/// Range and consistency checks for `command`; throws std::invalid_argument whose
/// message starts with the offending field name.
void validate(const RunConfig& config, Command command);

TestCurveParams curve_params(const RunConfig& config, std::size_t n);
/// The initial curve: curve_file if given, else the named test curve with n nodes.
ClosedCurve initial_curve(const RunConfig& config, std::size_t n);
SimulationConfig simulation_config(const RunConfig& config);
TwinConfig twin_config(const RunConfig& config);
SuiteOptions suite_options(const RunConfig& config);
ConvergenceConfig convergence_config(const RunConfig& config);

}  // namespace alpha_patch::cli
