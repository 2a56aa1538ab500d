#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbec/analytics.hpp"
#include "tbec/io.hpp"
#include "tbec/lattice.hpp"
#include "tbec/ndiff.hpp"
#include "tbec/observables.hpp"
#include "tbec/ode.hpp"

namespace tbec {

class BoundaryGuardError : public Error {
 public:
  BoundaryGuardError(const std::string& what, int suggested_L)
      : Error(what), suggested_L_(suggested_L) {}
  [[nodiscard]] int suggested_L() const { return suggested_L_; }

 private:
  int suggested_L_;
};

class ConservationError : public Error {
 public:
  using Error::Error;
};

enum class ScenarioKind { Dnlse, Diffusion };
enum class TimeUnit { Natural, TwoPi, Bloch, Revival };
enum class InitialKind { ThomasFermi, Uniform, Gaussian, SingleSite };

struct InitialCondition {
  InitialKind kind = InitialKind::ThomasFermi;
  double alpha = 0.001;
  double variance = 16.0;  // Gaussian population variance
  int site = 0;
};

struct ScenarioConfig {
  std::string name = "custom";
  ScenarioKind kind = ScenarioKind::Dnlse;
  ModelParams params{1.0, 10.0, 100.0, 64};
  InitialCondition initial;
  Frame frame = Frame::Gauge;
  IntegratorConfig integrator;

  // Output grid: samples at t = i / samples_per_unit (in `unit`) up to horizon.
  TimeUnit unit = TimeUnit::Revival;
  double horizon = 1.0;
  double samples_per_unit = 512.0;
  ObservableSelection observe;
  bool lyapunov = false;
  double average_window = 0.0;  // trailing profile average, in Bloch periods

  double guard_threshold = 1e-8;
  int guard_band = 8;
  double max_norm_drift = 1e-6;  // absolute; larger drift aborts the run

  // Diffusion scenarios.
  DiffusionModel diffusion_model = DiffusionModel::Nonlinear;
  double diffusion_coefficient = 50.0;
  std::vector<double> snapshots;  // in units of 2 pi

  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "runs/custom";
  TableFormat format = TableFormat::Tsv;

  void validate() const;
  /// T_B = 2 pi / F (never user-entered).
  [[nodiscard]] double bloch_period() const;
  /// T_rev = 2 pi / (g alpha) for Thomas-Fermi initial states.
  [[nodiscard]] double revival_period() const;
  [[nodiscard]] double time_unit_value() const;
  [[nodiscard]] std::vector<double> sample_times() const;
};

std::string to_string(TimeUnit u);
std::vector<std::string> builtin_scenario_names();
/// fig1 ... fig5 parameter sets.
ScenarioConfig builtin_scenario(const std::string& name);
/// Flat INI file; a `[scenario] base = figN` key starts from a built-in.
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
  std::optional<int> L;
  std::optional<double> tolerance;
  std::optional<double> horizon;
};
void apply_overrides(ScenarioConfig& config, const Overrides& overrides);

LatticeState initial_state(const ScenarioConfig& config);

struct RunResult {
  ObservableSeries series;          // DNLSE scenarios
  std::optional<DiffusionRun> diffusion;
  nlohmann::json report;
  std::vector<std::filesystem::path> files;
};

/// Executes the configured pipeline and writes data files plus report.json
/// into config.output_dir. Throws BoundaryGuardError / ConservationError.
RunResult run_scenario(const ScenarioConfig& config);

/// Runs every variant of a sweep file concurrently; returns the summary.
nlohmann::json run_sweep(const std::filesystem::path& config_file, const Overrides& overrides);

/// Human-readable summary of a finished run directory.
std::string summarize_report(const std::filesystem::path& run_dir);

}  // namespace tbec
