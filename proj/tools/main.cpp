#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <alpha_patch/io.hpp>

#include "run_config.hpp"

namespace ap = alpha_patch;
namespace cli = alpha_patch::cli;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kPartial = 2, kSoftFailure = 3 };

// Flags parse into a scratch RunConfig; only the flags actually given are copied
// over the file values afterwards.
struct FlagSet {
  cli::RunConfig parsed;
  double alpha = 0.0;
  std::string config_file;
  std::vector<std::pair<CLI::Option*, std::function<void(cli::RunConfig&)>>> copies;

  template <class T>
  void add(CLI::App& app, const std::string& names, T cli::RunConfig::*member, const std::string& help) {
    CLI::Option* opt = app.add_option(names, parsed.*member, help);
    copies.emplace_back(opt, [this, member](cli::RunConfig& c) { c.*member = parsed.*member; });
  }

  void apply(cli::RunConfig& c) const {
    for (const auto& [opt, copy] : copies)
      if (opt->count() > 0) copy(c);
  }
};

void add_common(CLI::App& app, FlagSet& f, bool stepping) {
  app.add_option("--config", f.config_file, "flat JSON file of RunConfig fields; flags override it")
      ->check(CLI::ExistingFile);
  CLI::Option* alpha = app.add_option("--alpha", f.alpha, "kernel exponent, 0 < alpha < 1/2");
  f.copies.emplace_back(alpha, [&f](cli::RunConfig& c) { c.alpha = f.alpha; });
  f.add(app, "--n,--n-nodes", &cli::RunConfig::n_nodes, "number of boundary nodes");
  f.add(app, "--dt", &cli::RunConfig::dt, "time step (initial step for convergence)");
  f.add(app, "--t-end", &cli::RunConfig::t_end, "final time");
  f.add(app, "--output-dir,-o", &cli::RunConfig::output_dir, "directory for output files");
  f.add(app, "--seed", &cli::RunConfig::seed, "seed for random test curves");
  f.add(app, "--diff-scheme", &cli::RunConfig::diff_scheme, "spectral or fd4");
  f.add(app, "--emit-every", &cli::RunConfig::emit_every, "snapshot cadence in steps");

  f.add(app, "--curve", &cli::RunConfig::curve, "circle, ellipse, star, rough_c1beta or w2p_spike");
  f.add(app, "--curve-file", &cli::RunConfig::curve_file, "snapshot JSON to start from instead of --curve");
  f.add(app, "--radius", &cli::RunConfig::radius, "circle radius");
  f.add(app, "--a", &cli::RunConfig::a, "ellipse semi-axis along x");
  f.add(app, "--b", &cli::RunConfig::b, "ellipse semi-axis along y");
  f.add(app, "--lobes", &cli::RunConfig::lobes, "star lobe count");
  f.add(app, "--amp", &cli::RunConfig::amp, "star amplitude");
  f.add(app, "--beta0", &cli::RunConfig::beta0, "tangent regularity of rough_c1beta");
  f.add(app, "--rough-amp", &cli::RunConfig::rough_amp, "rough_c1beta amplitude");
  f.add(app, "--lacunarity", &cli::RunConfig::lacunarity, "rough_c1beta frequency ratio");
  f.add(app, "--p0", &cli::RunConfig::p0, "curvature integrability of w2p_spike");
  f.add(app, "--strength", &cli::RunConfig::strength, "w2p_spike amplitude factor");

  if (!stepping) return;
  f.add(app, "--step-scheme", &cli::RunConfig::step_scheme, "rk4 or euler");
  f.add(app, "--reparam-every", &cli::RunConfig::reparam_every, "arc-length reparameterization cadence, 0 = never");
  f.add(app, "--tangent-projection", &cli::RunConfig::tangent_projection, "renormalize T after each step");
  f.add(app, "--cfl", &cli::RunConfig::cfl, "CFL number");
  f.add(app, "--consistency-tol", &cli::RunConfig::consistency_tol, "allowed g T - dgamma/dx residual");
  f.add(app, "--check-simplicity", &cli::RunConfig::check_simplicity, "abort on self-intersection");
}

cli::RunConfig resolve(const FlagSet& f) {
  cli::RunConfig c;
  if (!f.config_file.empty()) cli::apply_json(c, ap::io::read_text_file(f.config_file));
  f.apply(c);
  return c;
}

template <class Writer>
void write_csv(const fs::path& path, Writer&& writer) {
  std::ostringstream ss;
  writer(ss);
  ap::io::write_text_file(path, ss.str());
}

int run_simulate(const cli::RunConfig& c) {
  const fs::path dir = c.output_dir;
  fs::create_directories(dir);
  const ap::ClosedCurve initial = cli::initial_curve(c, c.n_nodes);
  const double alpha = *c.alpha;
  std::size_t index = 0;
  const auto traj = ap::run_simulation(cli::simulation_config(c), initial, ap::KernelParams(alpha),
                                       [&](const ap::FlowState& s, const ap::Diagnostics&) {
                                         ap::io::write_snapshot(dir / ap::io::snapshot_filename(index++), s, alpha);
                                       });
  write_csv(dir / "diagnostics.csv", [&](std::ostream& o) { ap::io::write_diagnostics_csv(o, traj.diagnostics); });
  std::cout << "wrote " << index << " snapshots and diagnostics.csv to " << dir.string() << "\n";
  if (traj.aborted) {
    std::cerr << "run aborted at t = " << traj.snapshots.back().time << ": " << traj.abort_reason << "\n";
    return kPartial;
  }
  return kOk;
}

int run_twin(const cli::RunConfig& c) {
  const fs::path dir = c.output_dir;
  fs::create_directories(dir);
  const auto report = ap::run_twin(cli::twin_config(c), cli::initial_curve(c, c.n_nodes));
  write_csv(dir / "stability.csv", [&](std::ostream& o) { ap::io::write_stability_csv(o, report); });
  ap::io::write_text_file(dir / "fit.json", ap::io::fit_summary_json(report));
  if (report.fitted)
    std::cout << "fitted C = " << ap::io::format_double(report.fitted_C)
              << (report.holds_pointwise ? ", bound holds at every sample\n" : ", bound violated at some sample\n");
  else
    std::cout << "no Gronwall fit: " << report.note << "\n";
  if (report.truncated) {
    std::cerr << "one twin aborted; series truncated\n";
    return kPartial;
  }
  return kOk;
}

int run_verify(const cli::RunConfig& c) {
  const fs::path dir = c.output_dir;
  fs::create_directories(dir);
  const ap::ClosedCurve curve = ap::arc_length_reparameterize(cli::initial_curve(c, c.n_nodes));
  const std::vector<std::string> ids =
      c.estimates.empty() ? ap::estimate_ids() : ap::select_estimates(c.estimates);
  const auto reports = ap::run_estimate_suite(curve, ap::KernelParams(*c.alpha), ids, cli::suite_options(c));
  write_csv(dir / "estimates.csv", [&](std::ostream& o) { ap::io::write_estimates_csv(o, reports); });
  int status = kOk;
  for (const auto& r : reports) {
    std::cout << r.estimate_id << ": exponent " << ap::io::format_double(r.fitted_exponent) << " (predicted "
              << ap::io::format_double(r.predicted_exponent) << "), stability "
              << ap::io::format_double(r.refinement_stability) << "\n";
    if (r.refinement_stability > c.stability_threshold) status = kSoftFailure;
  }
  if (status == kSoftFailure) std::cerr << "some refinement_stability values exceed the threshold\n";
  return status;
}

int run_convergence(const cli::RunConfig& c) {
  const fs::path dir = c.output_dir;
  fs::create_directories(dir);
  const auto study = ap::run_convergence(
      cli::convergence_config(c), [&](std::size_t n) { return cli::initial_curve(c, n); },
      ap::KernelParams(*c.alpha));
  write_csv(dir / "convergence.csv", [&](std::ostream& o) { ap::io::write_convergence_csv(o, study); });
  bool aborted = false;
  for (const auto& l : study.levels) aborted = aborted || l.aborted;
  std::cout << "wrote convergence.csv (" << study.levels.size() << " levels) to " << dir.string() << "\n";
  return aborted ? kPartial : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary dynamics of alpha-patches: simulation, stability twins and estimate checks"};
  app.require_subcommand(1);

  struct Sub {
    cli::Command command;
    CLI::App* app;
    FlagSet flags;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  auto make = [&](cli::Command cmd, const char* help) -> Sub& {
    auto s = std::make_unique<Sub>();
    s->command = cmd;
    s->app = app.add_subcommand(std::string(cli::to_string(cmd)), help);
    subs.push_back(std::move(s));
    return *subs.back();
  };

  Sub& sim = make(cli::Command::simulate, "evolve a patch boundary and write snapshots");
  add_common(*sim.app, sim.flags, true);

  Sub& twin = make(cli::Command::twin, "run two nearby initial curves and fit a Gronwall constant");
  add_common(*twin.app, twin.flags, true);
  twin.flags.add(*twin.app, "--perturbation", &cli::RunConfig::perturbation,
                 "normal-bump, fourier-mode or label-shift");
  twin.flags.add(*twin.app, "--epsilon", &cli::RunConfig::epsilon, "perturbation size");
  twin.flags.add(*twin.app, "--mode", &cli::RunConfig::mode, "fourier-mode frequency");

  Sub& ver = make(cli::Command::verify, "check the Hölder and kernel estimates on one curve");
  add_common(*ver.app, ver.flags, false);
  ver.flags.add(*ver.app, "--estimates", &cli::RunConfig::estimates, "comma list of estimate ids or prefixes");
  ver.flags.add(*ver.app, "--p", &cli::RunConfig::p, "Sobolev exponent");
  ver.flags.add(*ver.app, "--beta", &cli::RunConfig::beta, "Hölder exponent of the tangent");
  ver.flags.add(*ver.app, "--base-points", &cli::RunConfig::base_points, "base points for the sup over s");
  ver.flags.add(*ver.app, "--refine", &cli::RunConfig::refine, "also evaluate at 2N");
  ver.flags.add(*ver.app, "--stability-threshold", &cli::RunConfig::stability_threshold,
                "largest acceptable refinement_stability");

  Sub& conv = make(cli::Command::convergence, "refinement study in N and dt");
  add_common(*conv.app, conv.flags, true);
  conv.flags.add(*conv.app, "--levels", &cli::RunConfig::levels, "number of resolutions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  for (const auto& s : subs) {
    if (!s->app->parsed()) continue;
    try {
      const cli::RunConfig config = resolve(s->flags);
      cli::validate(config, s->command);
      switch (s->command) {
        case cli::Command::simulate:
          return run_simulate(config);
        case cli::Command::twin:
          return run_twin(config);
        case cli::Command::verify:
          return run_verify(config);
        case cli::Command::convergence:
          return run_convergence(config);
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    }
  }
  return kUsage;
}
