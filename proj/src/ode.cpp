#include "tbec/ode.hpp"

#include <limits>

namespace tbec {

void IntegratorConfig::validate() const {
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw Error("integrator dt must be positive");
  if (!(tolerance > 0.0 && tolerance <= 1e-3))
    throw Error("integrator tolerance must lie in (0, 1e-3]");
  if (renorm_interval < 0) throw Error("renorm_interval must be nonnegative");
}

std::string to_string(Scheme s) { return s == Scheme::FixedStepRK4 ? "rk4" : "dopri5"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "rk4") return Scheme::FixedStepRK4;
  if (s == "dopri5" || s == "adaptive") return Scheme::AdaptiveEmbedded;
  throw Error("unknown integration scheme '" + s + "' (expected rk4 or dopri5)");
}

OdeStepper::OdeStepper(const IntegratorConfig& config, double dt, std::size_t n)
    : config_(config), dt_(dt), h_adaptive_(dt), k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {
  config_.validate();
  if (!(dt_ > 0.0)) throw Error("time step must be positive");
  if (config_.scheme == Scheme::AdaptiveEmbedded) {
    k5_.resize(n);
    k6_.resize(n);
    k7_.resize(n);
    y_new_.resize(n);
  }
}

void OdeStepper::rk4_step(const OdeRhs& rhs, std::vector<cplx>& y, double t, double h) {
  const std::size_t n = y.size();
  rhs(t, y, k1_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + (0.5 * h) * k1_[i];
  rhs(t + 0.5 * h, tmp_, k2_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + (0.5 * h) * k2_[i];
  rhs(t + 0.5 * h, tmp_, k3_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * k3_[i];
  rhs(t + h, tmp_, k4_);
  const double h6 = h / 6.0;
  for (std::size_t i = 0; i < n; ++i)
    y[i] += h6 * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
}

double OdeStepper::dopri_step(const OdeRhs& rhs, const std::vector<cplx>& y, double t,
                              double h) {
  constexpr double a21 = 1.0 / 5.0;
  constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                   a54 = -212.0 / 729.0;
  constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                   a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                   b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                   e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  const std::size_t n = y.size();
  rhs(t, y, k1_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a21 * k1_[i]);
  rhs(t + h / 5.0, tmp_, k2_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
  rhs(t + 3.0 * h / 10.0, tmp_, k3_);
  for (std::size_t i = 0; i < n; ++i)
    tmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
  rhs(t + 4.0 * h / 5.0, tmp_, k4_);
  for (std::size_t i = 0; i < n; ++i)
    tmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
  rhs(t + 8.0 * h / 9.0, tmp_, k5_);
  for (std::size_t i = 0; i < n; ++i)
    tmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                          a65 * k5_[i]);
  rhs(t + h, tmp_, k6_);
  for (std::size_t i = 0; i < n; ++i)
    y_new_[i] = y[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] + b6 * k6_[i]);
  rhs(t + h, y_new_, k7_);
  const double tol = config_.tolerance;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] +
                        e7 * k7_[i]);
    const double scale = tol * (1.0 + std::max(std::abs(y[i]), std::abs(y_new_[i])));
    acc += std::norm(e) / (scale * scale);
  }
  return std::sqrt(acc / static_cast<double>(n));
}

void OdeStepper::advance(const OdeRhs& rhs, std::vector<cplx>& y, double t0, double t1,
                         const StepHook& hook) {
  const double span = t1 - t0;
  if (span == 0.0) return;
  const double dir = span > 0.0 ? 1.0 : -1.0;

  if (config_.scheme == Scheme::FixedStepRK4) {
    const auto n = static_cast<long>(std::max(1.0, std::ceil(std::abs(span) / dt_ - 1e-9)));
    const double h = span / static_cast<double>(n);
    for (long s = 0; s < n; ++s) {
      const double t = t0 + static_cast<double>(s) * h;
      rk4_step(rhs, y, t, h);
      ++steps_;
      if (hook) hook(s + 1 == n ? t1 : t + h, y);
    }
    return;
  }

  double t = t0;
  double h = std::min(std::abs(h_adaptive_), std::abs(span));
  const double h_min = 1e-13 * std::max(1.0, std::max(std::abs(t0), std::abs(t1)));
  while (dir * (t1 - t) > 0.0) {
    bool last = false;
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    if (h < h_min)
      throw StepSizeUnderflow("adaptive step size underflow at t = " + std::to_string(t) +
                              " (tolerance " + std::to_string(config_.tolerance) + ")");
    const double err = dopri_step(rhs, y, t, dir * h);
    if (err <= 1.0) {
      t = last ? t1 : t + dir * h;
      y.swap(y_new_);
      ++steps_;
      if (hook) hook(t, y);
      const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      const double grown = h * std::clamp(fac, 0.2, 5.0);
      // Keep the controller's estimate when the interval end clipped the step.
      if (!last || grown > h_adaptive_) h_adaptive_ = grown;
      h = grown;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      last = false;
    }
  }
}

}  // namespace tbec
