#include <cmath>
#include <numbers>
#include <vector>

#include "tbec/kernels.hpp"

namespace tbec::kernels::omp {

namespace {

inline cplx minus_i(cplx z) { return {z.imag(), -z.real()}; }

inline cplx site_value(const cplx* a, int j, int up, int down, cplx f, cplx b,
                       const SiteCoeffs& c) {
  const double l = static_cast<double>(j - c.origin);
  const cplx hop = f * a[up] + b * a[down];
  return minus_i((c.tilt * l + c.g * std::norm(a[j])) * a[j] - 0.5 * c.J * hop);
}

inline cplx tangent_value(const cplx* a, const cplx* d, int j, int up, int down, cplx f, cplx b,
                          const SiteCoeffs& c) {
  const double l = static_cast<double>(j - c.origin);
  const cplx hop = f * d[up] + b * d[down];
  return minus_i((c.tilt * l + 2.0 * c.g * std::norm(a[j])) * d[j] +
                 c.g * (a[j] * a[j]) * std::conj(d[j]) - 0.5 * c.J * hop);
}

inline double cube(double x) { return x * x * x; }

}  // namespace

void site_rhs(std::span<const cplx> a, std::span<cplx> out, const SiteCoeffs& c) {
  const int L = static_cast<int>(a.size());
  const cplx* pa = a.data();
  cplx* po = out.data();
  po[0] = site_value(pa, 0, 1, L - 1, c.fwd, c.wrap_bwd, c);
#pragma omp parallel for schedule(static) if (L >= kParallelThreshold)
  for (int j = 1; j < L - 1; ++j) po[j] = site_value(pa, j, j + 1, j - 1, c.fwd, c.bwd, c);
  po[L - 1] = site_value(pa, L - 1, 0, L - 2, c.wrap_fwd, c.bwd, c);
}

void tangent_rhs(std::span<const cplx> a, std::span<const cplx> d, std::span<cplx> out,
                 const SiteCoeffs& c) {
  const int L = static_cast<int>(a.size());
  const cplx* pa = a.data();
  const cplx* pd = d.data();
  cplx* po = out.data();
  po[0] = tangent_value(pa, pd, 0, 1, L - 1, c.fwd, c.wrap_bwd, c);
#pragma omp parallel for schedule(static) if (L >= kParallelThreshold)
  for (int j = 1; j < L - 1; ++j)
    po[j] = tangent_value(pa, pd, j, j + 1, j - 1, c.fwd, c.bwd, c);
  po[L - 1] = tangent_value(pa, pd, L - 1, 0, L - 2, c.wrap_fwd, c.bwd, c);
}

void momentum_rhs(std::span<const cplx> b, std::span<cplx> out, double J, double g, double F,
                  double t) {
  const int L = static_cast<int>(b.size());
  const int half = L / 2;
  // Raw (mod L) mode storage so the delta constraint is plain index arithmetic.
  std::vector<cplx> raw(L), raw_conj(L);
  for (int q = 0; q < L; ++q) {
    const int r = (q + half) % L;
    raw[r] = b[q];
    raw_conj[r] = std::conj(b[q]);
  }
#pragma omp parallel for schedule(static) if (L >= 32)
  for (int q = 0; q < L; ++q) {
    const int k = q - half;
    const double kappa = 2.0 * 3.14159265358979323846 * k / L;
    cplx conv{0.0, 0.0};
    for (int i1 = 0; i1 < L; ++i1) {
      // Signed loop order matches the serial reference: k1, k2 from -half upward.
      const int r1 = (i1 + half) % L;
      const int k1 = i1 - half;
      for (int i2 = 0; i2 < L; ++i2) {
        const int r2 = (i2 + half) % L;
        const int k2 = i2 - half;
        const int r3 = (((k1 + k2 - k) % L) + L) % L;
        conv += raw[r1] * raw[r2] * raw_conj[r3];
      }
    }
    const cplx h = -J * std::cos(kappa - F * t) * b[q] + (g / L) * conv;
    out[q] = minus_i(h);
  }
}

void linear_diffusion_step(std::span<const double> P, std::span<double> out, double D,
                           double dt) {
  const int L = static_cast<int>(P.size());
  const double* p = P.data();
  double* o = out.data();
  o[0] = p[0] + dt * (0.0 - D * (p[0] - p[1]));
#pragma omp parallel for schedule(static) if (L >= kParallelThreshold)
  for (int j = 1; j < L - 1; ++j) o[j] = p[j] + dt * (D * (p[j - 1] - p[j]) - D * (p[j] - p[j + 1]));
  o[L - 1] = p[L - 1] + dt * (D * (p[L - 2] - p[L - 1]) - 0.0);
}

void nonlinear_diffusion_step(std::span<const double> P, std::span<double> out, double D_tilde,
                              double dt) {
  const int L = static_cast<int>(P.size());
  const double* p = P.data();
  double* o = out.data();
  o[0] = p[0] + dt * (0.0 - D_tilde * (cube(p[0]) - cube(p[1])));
#pragma omp parallel for schedule(static) if (L >= kParallelThreshold)
  for (int j = 1; j < L - 1; ++j)
    o[j] = p[j] + dt * (D_tilde * (cube(p[j - 1]) - cube(p[j])) -
                        D_tilde * (cube(p[j]) - cube(p[j + 1])));
  o[L - 1] = p[L - 1] + dt * (D_tilde * (cube(p[L - 2]) - cube(p[L - 1])) - 0.0);
}

}  // namespace tbec::kernels::omp
