#pragma once

#include <span>
#include <vector>

#include "tbec/analytics.hpp"
#include "tbec/lattice.hpp"

namespace tbec {

class StabilityError : public Error {
 public:
  using Error::Error;
};

/// Nonnegative site populations on the same window as the lattice
/// (slot j <-> l = j - L/2). The ends are closed (no flux).
struct DiffusionProfile {
  std::vector<double> P;
  double time = 0.0;
};

struct DiffusionParams {
  double gamma = 0.0;    // fluctuation rate
  double F = 0.0;
  double D = 0.0;        // linear coefficient
  double D_tilde = 0.0;  // nonlinear coefficient

  /// D from gamma and F; D_tilde is a free input.
  static DiffusionParams from_gamma(double gamma, double F, double D_tilde = 0.0);
};

/// D = gamma / (F^2 + gamma^2).
double diffusion_coefficient(double gamma, double F);

DiffusionProfile profile_from_state(const LatticeState& state);

/// Explicit step of dP/dt = D (P_{l+1} - 2 P_l + P_{l-1}); requires dt <= 1/(2D).
DiffusionProfile linear_step(const DiffusionProfile& profile, double D, double dt);

/// Largest dt = safety / (6 D_tilde max P^2) allowed for the nonlinear step.
double nonlinear_step_limit(std::span<const double> P, double D_tilde, double safety = 1.0);

/// Explicit step of dP/dt = D_tilde (P^3_{l+1} - 2 P^3_l + P^3_{l-1}).
DiffusionProfile nonlinear_step(const DiffusionProfile& profile, double D_tilde, double dt);

enum class DiffusionModel { Linear, Nonlinear };

struct DiffusionRunOptions {
  DiffusionModel model = DiffusionModel::Nonlinear;
  double coefficient = 50.0;   // D or D_tilde
  double safety = 0.5;         // fraction of the stability bound used per step
  double support_threshold = 1e-10;
  std::vector<double> sample_times;    // moments recorded here
  std::vector<double> snapshot_times;  // full profiles kept here
};

struct DiffusionRun {
  std::vector<double> times;
  std::vector<double> dispersion;
  std::vector<double> radius;
  std::vector<double> mass;
  std::vector<DiffusionProfile> snapshots;
  DiffusionProfile final;
  long steps = 0;
};

/// Evolves to the last sample or snapshot time, landing exactly on each.
DiffusionRun evolve_diffusion(DiffusionProfile profile, const DiffusionRunOptions& options);

/// Half-width (l_max - l_min)/2 of the sites with P > rel_threshold * max P.
double support_radius(std::span<const double> P, double rel_threshold = 1e-10);

struct ScalingResult {
  FitResult dispersion;
  FitResult radius;
};

/// Power-law fits of M(t) and the support radius over the asymptotic window
/// (last half-decade). Requires M(t_end) >= 10 M(0).
ScalingResult scaling_check(const DiffusionRun& run);

/// Sum |P - Q| / sum P.
double relative_l1(std::span<const double> P, std::span<const double> Q);

}  // namespace tbec
