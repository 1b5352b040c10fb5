#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>
#include <cmath>
#include <stdexcept>
#include <string>

#include <alpha_patch/io.hpp>

#include "run_config.hpp"

using namespace alpha_patch;
namespace fs = std::filesystem;

namespace {

std::string validation_error(const cli::RunConfig& c, cli::Command cmd) {
  try {
    cli::validate(c, cmd);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return {};
}

std::string json_error(const std::string& text) {
  cli::RunConfig c;
  try {
    cli::apply_json(c, text);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return {};
}

// Runs the CLI with stdout and stderr discarded and returns its exit status.
int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" ALPHA_PATCH_CLI "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) { return io::read_text_file(p); }

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::current_path() / "cli_out" / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config JSON overlay") {
  cli::RunConfig c;
  cli::apply_json(c, R"({"alpha": 0.3, "n_nodes": 512, "curve": "star", "refine": false, "seed": 11})");
  REQUIRE(c.alpha);
  CHECK(*c.alpha == 0.3);
  CHECK(c.n_nodes == 512);
  CHECK(c.curve == "star");
  CHECK_FALSE(c.refine);
  CHECK(c.seed == 11);
  CHECK(c.dt == 1e-3);  // untouched

  CHECK(json_error(R"({"alpah": 0.3})") == "alpah: unknown config field");
  CHECK(json_error(R"({"n_nodes": -4})") == "n_nodes: expected a nonnegative integer");
  CHECK(json_error(R"({"alpha": "0.3"})") == "alpha: expected a number");
  CHECK(json_error(R"({"refine": 1})") == "refine: expected true or false");
  CHECK(json_error("[1]") == "config: expected a flat JSON object");
  CHECK(json_error("{").rfind("config: not valid JSON", 0) == 0);
}

TEST_CASE("config validation names the field") {
  cli::RunConfig c;
  CHECK(validation_error(c, cli::Command::simulate) == "alpha: required (0 < alpha < 0.5)");
  c.alpha = 0.5;
  CHECK(validation_error(c, cli::Command::simulate) == "alpha: must lie in (0, 0.5)");
  c.alpha = 0.2;
  CHECK(validation_error(c, cli::Command::simulate).empty());

  c.n_nodes = 64;
  CHECK(validation_error(c, cli::Command::verify) == "n_nodes: verify needs at least 128 nodes");
  c.n_nodes = 256;
  c.estimates = "L3.2,L7";
  CHECK(validation_error(c, cli::Command::verify) == "estimates: unknown estimate id 'L7'");
  c.estimates.clear();
  c.levels = 1;
  CHECK(validation_error(c, cli::Command::convergence) == "levels: need at least 2 resolutions");
  c.levels = 3;
  c.curve = "square";
  CHECK(validation_error(c, cli::Command::simulate).rfind("curve: ", 0) == 0);
  c.curve = "star";
  c.amp = 1.0;
  CHECK(validation_error(c, cli::Command::simulate) == "amp: must satisfy |amp| < 1");
  c.amp = 0.3;
  c.perturbation = "wiggle";
  CHECK(validation_error(c, cli::Command::twin).rfind("perturbation: ", 0) == 0);
  CHECK(validation_error(c, cli::Command::simulate).empty());
}

TEST_CASE("config builders") {
  cli::RunConfig c;
  c.alpha = 0.25;
  c.dt = 2e-3;
  c.step_scheme = "euler";
  c.reparam_every = 4;
  c.perturbation = "label-shift";
  c.epsilon = 0.01;
  const auto sim = cli::simulation_config(c);
  CHECK(sim.stepper.dt == 2e-3);
  CHECK(sim.stepper.scheme == StepScheme::euler);
  CHECK(sim.stepper.reparam_every == 4);
  const auto twin = cli::twin_config(c);
  CHECK(twin.kind == PerturbationKind::label_shift);
  CHECK(twin.params.alpha() == 0.25);
  CHECK(cli::initial_curve(c, 64).size() == 64);
}

TEST_CASE("exit codes") {
  CHECK(run("--help") == 0);
  CHECK(run("simulate --help") == 0);
  CHECK(run("") == 1);
  CHECK(run("simulate --n 64") == 1);  // alpha missing
  CHECK(run("simulate --alpha 0.2 --bogus 1") == 1);
  CHECK(run("simulate --alpha 0.2 --config does_not_exist.json") == 1);
  CHECK(run("verify --alpha 0.2 --estimates L9 -o " + fresh_dir("badest").string()) == 1);
  CHECK(run("convergence --alpha 0.2 --levels 1 -o " + fresh_dir("levels").string()) == 1);

  // A perturbation large enough to fold the ellipse is rejected before any stepping.
  CHECK(run("twin --alpha 0.2 --curve ellipse --n 64 --epsilon 3 --t-end 0.01 -o " + fresh_dir("fold").string()) ==
        1);

  const fs::path bad = fs::current_path() / "cli_out" / "eight.json";
  fs::create_directories(bad.parent_path());
  std::ostringstream eight;
  eight << "{\"nodes\":[";
  for (int j = 0; j < 32; ++j) {
    const double t = 6.283185307179586 * j / 32.0 + 0.01;
    eight << (j ? "," : "") << "[" << std::sin(t) << "," << std::sin(t) * std::cos(t) + 0.3 * std::sin(t) << "]";
  }
  eight << "]}";
  io::write_text_file(bad, eight.str());
  CHECK(run("simulate --alpha 0.2 --curve-file " + bad.string() + " -o " + fresh_dir("eight").string()) == 1);

  // CFL violation on the first step: partial output and exit 2.
  const fs::path cfl = fresh_dir("cfl");
  CHECK(run("simulate --alpha 0.25 --n 64 --dt 0.5 --t-end 1 -o " + cfl.string()) == 2);
  CHECK(fs::exists(cfl / "snapshot_000000.json"));
  CHECK(fs::exists(cfl / "diagnostics.csv"));
}

TEST_CASE("simulate writes snapshots that read back") {
  const fs::path dir = fresh_dir("sim");
  REQUIRE(run("simulate --alpha 0.25 --curve ellipse --a 1.2 --n 64 --dt 2e-3 --t-end 0.01 --emit-every 2 -o " +
              dir.string()) == 0);
  int snaps = 0;
  for (const auto& e : fs::directory_iterator(dir)) snaps += e.path().extension() == ".json";
  CHECK(snaps == 4);
  const auto last = io::read_snapshot(dir / "snapshot_000003.json");
  CHECK(last.alpha == 0.25);
  CHECK(last.state.time == doctest::Approx(0.01));

  // Restarting from a snapshot file at a different resolution resamples it.
  const fs::path again = fresh_dir("restart");
  CHECK(run("simulate --alpha 0.25 --n 128 --t-end 0 --curve-file " + (dir / "snapshot_000003.json").string() +
            " -o " + again.string()) == 0);
  CHECK(io::read_snapshot(again / "snapshot_000000.json").state.curve.size() == 128);
}

TEST_CASE("identical twins through the CLI") {
  const fs::path dir = fresh_dir("twin0");
  REQUIRE(run("twin --alpha 0.2 --curve ellipse --n 64 --epsilon 0 --dt 2e-3 --t-end 0.02 --emit-every 5 -o " +
              dir.string()) == 0);
  std::istringstream csv(slurp(dir / "stability.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "time,delta,delta_gamma,delta_g,delta_T");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    const double delta = std::stod(line.substr(line.find(',') + 1));
    CHECK(delta <= 1e-24);
  }
  CHECK(rows == 3);
  CHECK(slurp(dir / "fit.json").find("\"holds_pointwise\": true") != std::string::npos);
}

TEST_CASE("verify with a config file") {
  const fs::path dir = fresh_dir("verify");
  fs::create_directories(dir);
  io::write_text_file(dir / "config.json",
                      R"({"alpha": 0.25, "curve": "ellipse", "n_nodes": 256, "estimates": "L3.2,L5.1-odd"})");
  REQUIRE(run("verify --config " + (dir / "config.json").string() + " -o " + dir.string()) == 0);
  const std::string csv = slurp(dir / "estimates.csv");
  CHECK(csv.find("\nL3.2-holder,0.25,") != std::string::npos);
  CHECK(csv.find("\nL5.1-odd,0.25,") != std::string::npos);

  // A flag overrides the file value.
  CHECK(run("verify --config " + (dir / "config.json").string() + " --n 64 -o " + dir.string()) == 1);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  struct Case {
    std::string name, args;
    std::vector<std::string> files;
  };
  const Case cases[] = {
      {"sim", "simulate --alpha 0.3 --curve star --n 128 --dt 1e-3 --t-end 0.005 --emit-every 5",
       {"snapshot_000000.json", "snapshot_000001.json", "diagnostics.csv"}},
      {"twin", "twin --alpha 0.2 --curve ellipse --n 64 --dt 2e-3 --t-end 0.02 --emit-every 5",
       {"stability.csv", "fit.json"}},
      {"verify", "verify --alpha 0.2 --curve rough_c1beta --beta0 0.6 --seed 3 --n 256 --estimates L3.2,L5.1-pv",
       {"estimates.csv"}},
      {"conv", "convergence --alpha 0.2 --curve ellipse --a 1.2 --n 32 --dt 4e-3 --t-end 0.02 --levels 2",
       {"convergence.csv"}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const fs::path one = fresh_dir(c.name + "_t1"), again = fresh_dir(c.name + "_t1b"), three = fresh_dir(c.name + "_t3");
    REQUIRE(run(c.args + " -o " + one.string(), "ALPHA_PATCH_THREADS=1") == 0);
    REQUIRE(run(c.args + " -o " + again.string(), "ALPHA_PATCH_THREADS=1") == 0);
    REQUIRE(run(c.args + " -o " + three.string(), "ALPHA_PATCH_THREADS=3") == 0);
    for (const auto& f : c.files) {
      CAPTURE(f);
      const std::string ref = slurp(one / f);
      CHECK_FALSE(ref.empty());
      CHECK(slurp(again / f) == ref);
      CHECK(slurp(three / f) == ref);
    }
  }
}
