#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "tbec/scenario.hpp"

namespace {

bool is_builtin(const std::string& name) {
  for (const auto& n : tbec::builtin_scenario_names())
    if (n == name) return true;
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tilted-lattice condensate simulator"};
  app.require_subcommand(1);

  tbec::Overrides overrides;
  std::uint64_t seed = 0;
  std::string out_dir;
  int L = 0;
  double tol = 0.0;
  double horizon = -1.0;
  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "tangent-vector random seed");
    cmd->add_option("-o,--out", out_dir, "output directory");
    cmd->add_option("--L", L, "lattice size override (even, >= 4)");
    cmd->add_option("--tol", tol, "adaptive integrator tolerance (switches to dopri5)");
    cmd->add_option("--horizon", horizon, "horizon override in the scenario's time unit");
  };

  std::string target;
  auto* run = app.add_subcommand("run", "run a built-in scenario (fig1..fig5) or a config file");
  run->add_option("scenario", target, "scenario name or INI config path")->required();
  add_overrides(run);

  std::string sweep_file;
  auto* sweep = app.add_subcommand("sweep", "run every variant of a sweep config concurrently");
  sweep->add_option("config", sweep_file, "INI config with a [sweep] section")->required()->check(CLI::ExistingFile);
  add_overrides(sweep);

  std::string run_dir;
  auto* report = app.add_subcommand("report", "summarize a finished run directory");
  report->add_option("run-dir", run_dir, "directory holding report.json")->required();

  CLI11_PARSE(app, argc, argv);

  auto collect = [&](CLI::App* cmd) {
    if (cmd->count("--seed")) overrides.seed = seed;
    if (cmd->count("--out")) overrides.output_dir = out_dir;
    if (cmd->count("--L")) overrides.L = L;
    if (cmd->count("--tol")) overrides.tolerance = tol;
    if (cmd->count("--horizon")) overrides.horizon = horizon;
  };

  try {
    if (*run) {
      collect(run);
      tbec::ScenarioConfig config = is_builtin(target)
                                        ? tbec::builtin_scenario(target)
                                        : tbec::load_scenario_config(target);
      tbec::apply_overrides(config, overrides);
      const auto result = tbec::run_scenario(config);
      std::cout << tbec::summarize_report(config.output_dir);
      std::cout << "wrote " << result.files.size() + 1 << " files to " << config.output_dir.string()
                << '\n';
    } else if (*sweep) {
      collect(sweep);
      const auto summary = tbec::run_sweep(sweep_file, overrides);
      int failed = 0;
      for (const auto& r : summary["runs"]) {
        std::cout << r["name"].get<std::string>() << ": " << r["status"].get<std::string>();
        if (r["status"] == "error") {
          ++failed;
          std::cout << " (" << r["error"].get<std::string>() << ')';
        }
        std::cout << '\n';
      }
      return failed == 0 ? 0 : 3;
    } else if (*report) {
      std::cout << tbec::summarize_report(run_dir);
    }
  } catch (const tbec::BoundaryGuardError& e) {
    std::cerr << "boundary guard: " << e.what() << '\n';
    return 4;
  } catch (const tbec::ConservationError& e) {
    std::cerr << "conservation: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
