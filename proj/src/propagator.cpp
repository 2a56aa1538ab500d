#include "tbec/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "denormals.hpp"
#include "tbec/kernels.hpp"

namespace tbec {

double TangentState::log_norm() const {
  return log_magnitude + 0.5 * std::log(norm_squared(delta));
}

void TangentState::renormalize() {
  const double n2 = norm_squared(delta);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw Error("tangent vector degenerated");
  const double n = std::sqrt(n2);
  for (auto& d : delta) d /= n;
  log_magnitude += std::log(n);
}

TangentState random_tangent(int L, std::uint64_t seed) {
  if (L <= 0) throw Error("tangent size must be positive");
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  };
  TangentState t;
  t.delta.resize(L);
  for (auto& d : t.delta) {
    const double re = uniform();
    const double im = uniform();
    d = {re, im};
  }
  t.renormalize();
  t.log_magnitude = 0.0;
  return t;
}

double default_time_step(const ModelParams& params, Frame frame) {
  double dt = std::min(params.bloch_period(), 1.0) / 200.0;
  if (frame == Frame::Static && params.F > 0.0)
    dt = std::min(dt, 0.02 / (params.F * params.L / 2.0));
  return dt;
}

namespace {

kernels::SiteCoeffs coeffs_for(Frame frame, const ModelParams& p, double t) {
  return frame == Frame::Static ? kernels::static_coeffs(p, t) : kernels::gauge_coeffs(p, t);
}

void check_state(const LatticeState& s, const ModelParams& p) {
  if (s.size() != p.L)
    throw Error("state has " + std::to_string(s.size()) + " sites, expected L = " +
                std::to_string(p.L));
}

int renorm_steps(const IntegratorConfig& config, const ModelParams& p, double dt) {
  if (config.renorm_interval > 0) return config.renorm_interval;
  const double period = std::isfinite(p.bloch_period()) ? p.bloch_period() : 10.0;
  return std::max(1, static_cast<int>(std::lround(period / dt)));
}

// Runs the stepper through every sample time in the interval, handing the
// observer a freshly assembled state.
template <class Emit>
void drive(OdeStepper& stepper, const OdeRhs& rhs, std::vector<cplx>& y, double t0, double t1,
           std::span<const double> times, const StepHook& hook, Emit&& emit) {
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  std::vector<double> samples;
  for (double s : times)
    if (dir * (s - t0) >= 0.0 && dir * (t1 - s) >= 0.0) samples.push_back(s);
  std::sort(samples.begin(), samples.end(),
            [dir](double a, double b) { return dir * a < dir * b; });
  double t = t0;
  for (double s : samples) {
    stepper.advance(rhs, y, t, s, hook);
    t = s;
    emit(t);
  }
  stepper.advance(rhs, y, t, t1, hook);
}

}  // namespace

Amplitudes derivative_static(const LatticeState& state, const ModelParams& params) {
  if (state.frame != Frame::Static) throw FrameMismatch("derivative_static needs a static-frame state");
  check_state(state, params);
  Amplitudes out(params.L);
  kernels::omp::site_rhs(state.amplitudes, out, kernels::static_coeffs(params, state.time));
  return out;
}

Amplitudes derivative_gauge(const LatticeState& state, const ModelParams& params) {
  if (state.frame != Frame::Gauge) throw FrameMismatch("derivative_gauge needs a gauge-frame state");
  check_state(state, params);
  Amplitudes out(params.L);
  kernels::omp::site_rhs(state.amplitudes, out, kernels::gauge_coeffs(params, state.time));
  return out;
}

Amplitudes derivative(const LatticeState& state, const ModelParams& params) {
  return state.frame == Frame::Static ? derivative_static(state, params)
                                      : derivative_gauge(state, params);
}

Amplitudes jacobian_action(const LatticeState& state, std::span<const cplx> delta,
                           const ModelParams& params) {
  check_state(state, params);
  if (static_cast<int>(delta.size()) != params.L) throw Error("tangent size does not match L");
  Amplitudes out(params.L);
  kernels::omp::tangent_rhs(state.amplitudes, delta, out,
                            coeffs_for(state.frame, params, state.time));
  return out;
}

LatticeState propagate(LatticeState state, const ModelParams& params,
                       const IntegratorConfig& config, double t_final,
                       const Observation& observation) {
  params.validate();
  check_state(state, params);
  const detail::FlushDenormals ftz;
  const double dt = config.dt > 0.0 ? config.dt : default_time_step(params, state.frame);
  OdeStepper stepper(config, dt, state.amplitudes.size());
  const Frame frame = state.frame;
  OdeRhs rhs = [&params, frame](double t, std::span<const cplx> y, std::span<cplx> dy) {
    kernels::omp::site_rhs(y, dy, coeffs_for(frame, params, t));
  };
  auto emit = [&](double t) {
    if (!observation.callback) return;
    state.time = t;
    observation.callback(state, nullptr);
  };
  drive(stepper, rhs, state.amplitudes, state.time, t_final, observation.times, {}, emit);
  state.time = t_final;
  return state;
}

std::pair<LatticeState, TangentState> propagate_with_tangent(
    LatticeState state, TangentState tangent, const ModelParams& params,
    const IntegratorConfig& config, double t_final, const Observation& observation) {
  params.validate();
  check_state(state, params);
  const int L = params.L;
  const detail::FlushDenormals ftz;
  if (static_cast<int>(tangent.delta.size()) != L) throw Error("tangent size does not match L");
  const double dt = config.dt > 0.0 ? config.dt : default_time_step(params, state.frame);
  const int interval = renorm_steps(config, params, dt);

  std::vector<cplx> y(2 * L);
  std::copy(state.amplitudes.begin(), state.amplitudes.end(), y.begin());
  std::copy(tangent.delta.begin(), tangent.delta.end(), y.begin() + L);
  double log_mag = tangent.log_magnitude;

  OdeStepper stepper(config, dt, y.size());
  const Frame frame = state.frame;
  OdeRhs rhs = [&params, frame, L](double t, std::span<const cplx> v, std::span<cplx> dv) {
    const auto c = coeffs_for(frame, params, t);
    const auto a = v.first(L);
    kernels::omp::site_rhs(a, dv.first(L), c);
    kernels::omp::tangent_rhs(a, v.subspan(L, L), dv.subspan(L, L), c);
  };
  long count = 0;
  auto renorm = [&](std::span<cplx> v) {
    auto d = v.subspan(L, L);
    const double n = std::sqrt(norm_squared(d));
    if (!(n > 0.0) || !std::isfinite(n)) throw Error("tangent vector degenerated");
    for (auto& z : d) z /= n;
    log_mag += std::log(n);
  };
  StepHook hook = [&](double, std::span<cplx> v) {
    ++count;
    if (count % interval == 0 || norm_squared(v.subspan(L, L)) > 1e200) renorm(v);
  };
  auto assemble = [&](double t) {
    state.amplitudes.assign(y.begin(), y.begin() + L);
    state.time = t;
    tangent.delta.assign(y.begin() + L, y.end());
    tangent.log_magnitude = log_mag;
  };
  auto emit = [&](double t) {
    if (!observation.callback) return;
    assemble(t);
    observation.callback(state, &tangent);
  };
  drive(stepper, rhs, y, state.time, t_final, observation.times, hook, emit);
  assemble(t_final);
  return {std::move(state), std::move(tangent)};
}

Amplitudes propagate_momentum(Amplitudes b, const ModelParams& params,
                              const IntegratorConfig& config, double t0, double t_final) {
  params.validate();
  if (params.L > kMomentumMaxL)
    throw Error("momentum-space propagation is limited to L <= " + std::to_string(kMomentumMaxL) +
                " (O(L^3) coupling sum), got L = " + std::to_string(params.L));
  if (static_cast<int>(b.size()) != params.L) throw Error("mode count does not match L");
  const detail::FlushDenormals ftz;
  const double dt = config.dt > 0.0 ? config.dt : default_time_step(params, Frame::Gauge);
  OdeStepper stepper(config, dt, b.size());
  OdeRhs rhs = [&params](double t, std::span<const cplx> y, std::span<cplx> dy) {
    kernels::omp::momentum_rhs(y, dy, params.J, params.g, params.F, t);
  };
  stepper.advance(rhs, b, t0, t_final);
  return b;
}

}  // namespace tbec
