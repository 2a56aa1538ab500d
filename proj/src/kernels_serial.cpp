#include <cmath>

#include "tbec/kernels.hpp"

namespace tbec::kernels {

SiteCoeffs static_coeffs(const ModelParams& p, double t) {
  SiteCoeffs c;
  c.J = p.J;
  c.g = p.g;
  c.tilt = p.F;
  c.origin = p.origin();
  const double twist = p.F * p.L * t;
  c.wrap_fwd = std::polar(1.0, -twist);
  c.wrap_bwd = std::polar(1.0, twist);
  return c;
}

SiteCoeffs gauge_coeffs(const ModelParams& p, double t) {
  SiteCoeffs c;
  c.J = p.J;
  c.g = p.g;
  c.tilt = 0.0;
  c.origin = p.origin();
  c.fwd = std::polar(1.0, -p.F * t);
  c.bwd = std::conj(c.fwd);
  c.wrap_fwd = c.fwd;
  c.wrap_bwd = c.bwd;
  return c;
}

namespace serial {

namespace {
inline cplx minus_i(cplx z) { return {z.imag(), -z.real()}; }
}  // namespace

void site_rhs(std::span<const cplx> a, std::span<cplx> out, const SiteCoeffs& c) {
  const int L = static_cast<int>(a.size());
  for (int j = 0; j < L; ++j) {
    const int up = (j + 1) % L;
    const int down = (j - 1 + L) % L;
    const cplx f = (j == L - 1) ? c.wrap_fwd : c.fwd;
    const cplx b = (j == 0) ? c.wrap_bwd : c.bwd;
    const double l = static_cast<double>(j - c.origin);
    const cplx hop = f * a[up] + b * a[down];
    const cplx h = (c.tilt * l + c.g * std::norm(a[j])) * a[j] - 0.5 * c.J * hop;
    out[j] = minus_i(h);
  }
}

void tangent_rhs(std::span<const cplx> a, std::span<const cplx> d, std::span<cplx> out,
                 const SiteCoeffs& c) {
  const int L = static_cast<int>(a.size());
  for (int j = 0; j < L; ++j) {
    const int up = (j + 1) % L;
    const int down = (j - 1 + L) % L;
    const cplx f = (j == L - 1) ? c.wrap_fwd : c.fwd;
    const cplx b = (j == 0) ? c.wrap_bwd : c.bwd;
    const double l = static_cast<double>(j - c.origin);
    const cplx hop = f * d[up] + b * d[down];
    const cplx h = (c.tilt * l + 2.0 * c.g * std::norm(a[j])) * d[j] +
                   c.g * (a[j] * a[j]) * std::conj(d[j]) - 0.5 * c.J * hop;
    out[j] = minus_i(h);
  }
}

void momentum_rhs(std::span<const cplx> b, std::span<cplx> out, double J, double g, double F,
                  double t) {
  const int L = static_cast<int>(b.size());
  const int half = L / 2;
  // q is the ascending-kappa slot, k = q - half the signed mode number.
  auto slot = [&](int k) { return ((k % L) + L + half) % L; };
  for (int q = 0; q < L; ++q) {
    const int k = q - half;
    const double kappa = 2.0 * 3.14159265358979323846 * k / L;
    cplx conv{0.0, 0.0};
    for (int k1 = -half; k1 < half; ++k1) {
      for (int k2 = -half; k2 < half; ++k2) {
        const int k3 = k1 + k2 - k;
        conv += b[slot(k1)] * b[slot(k2)] * std::conj(b[slot(k3)]);
      }
    }
    const cplx h = -J * std::cos(kappa - F * t) * b[q] + (g / L) * conv;
    out[q] = minus_i(h);
  }
}

void linear_diffusion_step(std::span<const double> P, std::span<double> out, double D,
                           double dt) {
  const int L = static_cast<int>(P.size());
  for (int j = 0; j < L; ++j) {
    const double in = (j > 0) ? D * (P[j - 1] - P[j]) : 0.0;
    const double outflux = (j < L - 1) ? D * (P[j] - P[j + 1]) : 0.0;
    out[j] = P[j] + dt * (in - outflux);
  }
}

void nonlinear_diffusion_step(std::span<const double> P, std::span<double> out, double D_tilde,
                              double dt) {
  const int L = static_cast<int>(P.size());
  auto cube = [](double x) { return x * x * x; };
  for (int j = 0; j < L; ++j) {
    const double in = (j > 0) ? D_tilde * (cube(P[j - 1]) - cube(P[j])) : 0.0;
    const double outflux = (j < L - 1) ? D_tilde * (cube(P[j]) - cube(P[j + 1])) : 0.0;
    out[j] = P[j] + dt * (in - outflux);
  }
}

}  // namespace serial
}  // namespace tbec::kernels
