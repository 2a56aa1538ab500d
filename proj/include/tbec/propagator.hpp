#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>

#include "tbec/lattice.hpp"
#include "tbec/ode.hpp"

namespace tbec {

/// Perturbation vector co-evolved with a trajectory. The true tangent
/// magnitude is exp(log_magnitude) * |delta|.
struct TangentState {
  Amplitudes delta;
  double log_magnitude = 0.0;

  /// ln |delta a(t)| including all discarded renormalization factors.
  [[nodiscard]] double log_norm() const;
  void renormalize();
};

/// Normalized tangent vector with independent uniform components drawn from a
/// seeded 64-bit Mersenne twister (portable bit extraction, no std distributions).
TangentState random_tangent(int L, std::uint64_t seed);

/// min(T_B, 1)/200; the static frame additionally resolves the largest
/// on-site frequency F*L/2.
double default_time_step(const ModelParams& params, Frame frame);

Amplitudes derivative_static(const LatticeState& state, const ModelParams& params);
Amplitudes derivative_gauge(const LatticeState& state, const ModelParams& params);
/// Dispatches on state.frame.
Amplitudes derivative(const LatticeState& state, const ModelParams& params);

/// Tangent right-hand side d(delta)/dt = -i M[a] delta in the state's frame.
/// Real-linear in delta because of the a^2 conj(delta) term.
Amplitudes jacobian_action(const LatticeState& state, std::span<const cplx> delta,
                           const ModelParams& params);

using Observer = std::function<void(const LatticeState&, const TangentState*)>;

/// Sample times at which the observer fires. Times outside the propagation
/// interval are ignored; a time equal to the start fires before stepping.
struct Observation {
  std::span<const double> times;
  Observer callback;
};

/// Integrates the site-space equation of motion in state.frame up to t_final.
LatticeState propagate(LatticeState state, const ModelParams& params,
                       const IntegratorConfig& config, double t_final,
                       const Observation& observation = {});

/// Joint integration of the trajectory and its tangent vector, renormalizing
/// the tangent every config.renorm_interval steps.
std::pair<LatticeState, TangentState> propagate_with_tangent(
    LatticeState state, TangentState tangent, const ModelParams& params,
    const IntegratorConfig& config, double t_final, const Observation& observation = {});

inline constexpr int kMomentumMaxL = 64;

/// Integrates the Bloch-wave amplitudes (ascending-kappa order) from t0 to
/// t_final with the O(L^3) mode-coupling sum. Validation path only: L <= 64.
Amplitudes propagate_momentum(Amplitudes b, const ModelParams& params,
                              const IntegratorConfig& config, double t0, double t_final);

}  // namespace tbec
