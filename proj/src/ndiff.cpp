#include "tbec/ndiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "denormals.hpp"
#include "tbec/kernels.hpp"
#include "tbec/observables.hpp"

namespace tbec {

DiffusionParams DiffusionParams::from_gamma(double gamma, double F, double D_tilde) {
  DiffusionParams p;
  p.gamma = gamma;
  p.F = F;
  p.D = diffusion_coefficient(gamma, F);
  p.D_tilde = D_tilde;
  return p;
}

double diffusion_coefficient(double gamma, double F) {
  if (gamma < 0.0 || F < 0.0) throw Error("gamma and F must be nonnegative");
  const double den = F * F + gamma * gamma;
  if (!(den > 0.0)) throw Error("diffusion coefficient undefined for gamma = F = 0");
  return gamma / den;
}

DiffusionProfile profile_from_state(const LatticeState& state) {
  return {populations(state.amplitudes), state.time};
}

DiffusionProfile linear_step(const DiffusionProfile& profile, double D, double dt) {
  if (!(D >= 0.0) || !(dt > 0.0)) throw Error("linear step needs D >= 0 and dt > 0");
  if (D * dt > 0.5)
    throw StabilityError("linear diffusion step violates dt <= 1/(2D): D dt = " +
                         std::to_string(D * dt));
  DiffusionProfile out{std::vector<double>(profile.P.size()), profile.time + dt};
  kernels::omp::linear_diffusion_step(profile.P, out.P, D, dt);
  return out;
}

double nonlinear_step_limit(std::span<const double> P, double D_tilde, double safety) {
  const double pmax = *std::max_element(P.begin(), P.end());
  const double denom = 6.0 * D_tilde * pmax * pmax;
  return denom > 0.0 ? safety / denom : std::numeric_limits<double>::infinity();
}

DiffusionProfile nonlinear_step(const DiffusionProfile& profile, double D_tilde, double dt) {
  if (!(D_tilde >= 0.0) || !(dt > 0.0)) throw Error("nonlinear step needs D_tilde >= 0 and dt > 0");
  if (dt > nonlinear_step_limit(profile.P, D_tilde, 1.0) * (1.0 + 1e-12))
    throw StabilityError("nonlinear diffusion step exceeds dt <= 1/(6 D_tilde max P^2)");
  DiffusionProfile out{std::vector<double>(profile.P.size()), profile.time + dt};
  kernels::omp::nonlinear_diffusion_step(profile.P, out.P, D_tilde, dt);
  for (double p : out.P)
    if (p < 0.0) throw StabilityError("negative population after nonlinear step; reduce dt");
  return out;
}

double support_radius(std::span<const double> P, double rel_threshold) {
  const double pmax = *std::max_element(P.begin(), P.end());
  const double cut = rel_threshold * pmax;
  int lo = -1, hi = -1;
  for (int j = 0; j < static_cast<int>(P.size()); ++j)
    if (P[j] > cut) {
      if (lo < 0) lo = j;
      hi = j;
    }
  if (lo < 0) return 0.0;
  return 0.5 * static_cast<double>(hi - lo);
}

DiffusionRun evolve_diffusion(DiffusionProfile profile, const DiffusionRunOptions& options) {
  if (profile.P.size() < 3) throw Error("diffusion profile needs at least three sites");
  if (!(options.safety > 0.0 && options.safety <= 1.0)) throw Error("safety must lie in (0, 1]");
  const detail::FlushDenormals ftz;
  std::set<double> stops(options.sample_times.begin(), options.sample_times.end());
  stops.insert(options.snapshot_times.begin(), options.snapshot_times.end());
  const std::set<double> sample_set(options.sample_times.begin(), options.sample_times.end());
  const std::set<double> snap_set(options.snapshot_times.begin(), options.snapshot_times.end());

  DiffusionRun run;
  auto record = [&](double t) {
    if (sample_set.count(t)) {
      run.times.push_back(t);
      run.dispersion.push_back(dispersion(profile.P));
      run.radius.push_back(support_radius(profile.P, options.support_threshold));
      double m = 0.0;
      for (double p : profile.P) m += p;
      run.mass.push_back(m);
    }
    if (snap_set.count(t)) run.snapshots.push_back(profile);
  };

  const double c = options.coefficient;
  for (double stop : stops) {
    if (stop < profile.time) continue;
    while (profile.time < stop) {
      double dt = options.model == DiffusionModel::Linear
                      ? (c > 0.0 ? options.safety * 0.5 / c : stop - profile.time)
                      : nonlinear_step_limit(profile.P, c, options.safety);
      bool last = false;
      if (profile.time + dt >= stop) {
        dt = stop - profile.time;
        last = true;
      }
      if (dt <= 0.0) break;
      profile = options.model == DiffusionModel::Linear ? linear_step(profile, c, dt)
                                                        : nonlinear_step(profile, c, dt);
      if (last) profile.time = stop;
      ++run.steps;
    }
    record(stop);
  }
  run.final = std::move(profile);
  return run;
}

ScalingResult scaling_check(const DiffusionRun& run) {
  if (run.times.size() < 2) throw Error("scaling check needs a sampled run");
  if (run.dispersion.back() < 10.0 * run.dispersion.front())
    throw Error("insufficient spreading for a scaling check: M(t_end) = " +
                std::to_string(run.dispersion.back()) + " < 10 M(0) = " +
                std::to_string(10.0 * run.dispersion.front()));
  const auto window = default_fit_window(run.times, run.dispersion);
  ScalingResult r;
  r.dispersion = fit_power_law(run.times, run.dispersion, window);
  r.radius = fit_power_law(run.times, run.radius, window);
  return r;
}

double relative_l1(std::span<const double> P, std::span<const double> Q) {
  if (P.size() != Q.size()) throw Error("profiles differ in length");
  double d = 0.0, m = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    d += std::abs(P[i] - Q[i]);
    m += P[i];
  }
  return d / m;
}

}  // namespace tbec
