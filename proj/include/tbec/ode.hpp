#pragma once

// Explicit Runge-Kutta steppers over complex state vectors.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "tbec/lattice.hpp"

namespace tbec {

class StepSizeUnderflow : public Error {
 public:
  using Error::Error;
};

enum class Scheme { FixedStepRK4, AdaptiveEmbedded };

struct IntegratorConfig {
  Scheme scheme = Scheme::FixedStepRK4;
  double dt = 0.0;           // fixed step; 0 selects default_time_step()
  double tolerance = 1e-10;  // adaptive local error tolerance
  int renorm_interval = 0;   // steps between tangent renormalizations; 0 = one Bloch period

  void validate() const;
};

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/// dy/dt = f(t, y), written into dy.
using OdeRhs = std::function<void(double t, std::span<const cplx> y, std::span<cplx> dy)>;
/// Called after every accepted step with the new time and state.
using StepHook = std::function<void(double t, std::span<cplx> y)>;

class OdeStepper {
 public:
  OdeStepper(const IntegratorConfig& config, double dt, std::size_t n);

  /// Advances y from t0 to t1 (either direction). Fixed-step mode divides the
  /// interval into equal steps no longer than dt so t1 is hit exactly.
  void advance(const OdeRhs& rhs, std::vector<cplx>& y, double t0, double t1,
               const StepHook& hook = {});

  [[nodiscard]] long steps_taken() const { return steps_; }

 private:
  void rk4_step(const OdeRhs& rhs, std::vector<cplx>& y, double t, double h);
  // Returns the scaled error norm; y_new_ receives the 5th-order solution.
  double dopri_step(const OdeRhs& rhs, const std::vector<cplx>& y, double t, double h);

  IntegratorConfig config_;
  double dt_;
  double h_adaptive_;
  long steps_ = 0;
  std::vector<cplx> k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y_new_;
};

}  // namespace tbec
