#pragma once

// Inner-loop kernels of the simulator. Every kernel exists twice: a plain
// serial reference (kernels::serial) kept for testing and benchmarking, and the
// OpenMP version (kernels::omp) used by the library. Both must produce
// bitwise-identical results; none of them contain reductions.

#include <span>

#include "tbec/lattice.hpp"

namespace tbec::kernels {

/// Coefficients of the site-space right-hand side
///   i da_j/dt = tilt*l_j*a_j - (J/2)(fwd*a_{j+1} + bwd*a_{j-1}) + g|a_j|^2 a_j,
/// where the bond that closes the ring (j = L-1 -> 0) uses wrap_fwd / wrap_bwd.
struct SiteCoeffs {
  double J = 1.0;
  double g = 0.0;
  double tilt = 0.0;
  int origin = 0;
  cplx fwd{1.0, 0.0};
  cplx bwd{1.0, 0.0};
  cplx wrap_fwd{1.0, 0.0};
  cplx wrap_bwd{1.0, 0.0};
};

/// Static-frame coefficients at time t. The closing bond carries the phase
/// exp(-+ i F L t) so that the static ring is the exact gauge image of the
/// gauge-frame ring.
SiteCoeffs static_coeffs(const ModelParams& p, double t);
SiteCoeffs gauge_coeffs(const ModelParams& p, double t);

namespace serial {
void site_rhs(std::span<const cplx> a, std::span<cplx> out, const SiteCoeffs& c);
/// Linearization of site_rhs at `a` applied to `d`:
///   i dd_j/dt = tilt*l_j*d_j - (J/2)(fwd d_{j+1} + bwd d_{j-1}) + g(2|a_j|^2 d_j + a_j^2 conj(d_j)).
void tangent_rhs(std::span<const cplx> a, std::span<const cplx> d, std::span<cplx> out,
                 const SiteCoeffs& c);
/// Momentum-space right-hand side, b ordered by ascending quasimomentum
/// (index q <-> k = q - L/2, kappa = 2 pi k / L).
void momentum_rhs(std::span<const cplx> b, std::span<cplx> out, double J, double g, double F,
                  double t);
/// One explicit flux-form step of dP/dt = D (P_{l+1} - 2P_l + P_{l-1}), no-flux ends.
void linear_diffusion_step(std::span<const double> P, std::span<double> out, double D, double dt);
/// One explicit flux-form step of dP/dt = Dt (P^3_{l+1} - 2P^3_l + P^3_{l-1}), no-flux ends.
void nonlinear_diffusion_step(std::span<const double> P, std::span<double> out, double D_tilde,
                              double dt);
}  // namespace serial

namespace omp {
void site_rhs(std::span<const cplx> a, std::span<cplx> out, const SiteCoeffs& c);
void tangent_rhs(std::span<const cplx> a, std::span<const cplx> d, std::span<cplx> out,
                 const SiteCoeffs& c);
void momentum_rhs(std::span<const cplx> b, std::span<cplx> out, double J, double g, double F,
                  double t);
void linear_diffusion_step(std::span<const double> P, std::span<double> out, double D, double dt);
void nonlinear_diffusion_step(std::span<const double> P, std::span<double> out, double D_tilde,
                              double dt);
}  // namespace omp

/// Lattice sizes below this run the OpenMP kernels on the calling thread.
inline constexpr int kParallelThreshold = 1024;

}  // namespace tbec::kernels
