#include <benchmark/benchmark.h>

#include <random>

#include "tbec/kernels.hpp"

using namespace tbec;

namespace {

Amplitudes field(int L) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  Amplitudes a(L);
  for (auto& z : a) z = {u(rng), u(rng)};
  return a;
}

std::vector<double> profile(int L) {
  std::vector<double> P(L);
  for (int j = 0; j < L; ++j) P[j] = 1.0 / (1.0 + std::abs(j - L / 2));
  return P;
}

template <auto Kernel>
void site_rhs(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const ModelParams p{1.0, 10.0, 0.25, L};
  const auto a = field(L);
  Amplitudes out(L);
  const auto c = kernels::gauge_coeffs(p, 1.0);
  for (auto _ : state) {
    Kernel(a, out, c);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * L);
}

template <auto Kernel>
void tangent_rhs(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const ModelParams p{1.0, 10.0, 0.25, L};
  const auto a = field(L), d = field(L);
  Amplitudes out(L);
  const auto c = kernels::gauge_coeffs(p, 1.0);
  for (auto _ : state) {
    Kernel(a, d, out, c);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * L);
}

template <auto Kernel>
void momentum_rhs(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto b = field(L);
  Amplitudes out(L);
  for (auto _ : state) {
    Kernel(b, out, 1.0, 10.0, 10.0, 0.3);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Kernel>
void nonlinear_diffusion(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto P = profile(L);
  std::vector<double> out(L);
  for (auto _ : state) {
    Kernel(P, out, 50.0, 1e-3);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * L);
}

}  // namespace

BENCHMARK(site_rhs<kernels::serial::site_rhs>)->Name("site_rhs/serial")->RangeMultiplier(8)->Range(64, 1 << 18);
BENCHMARK(site_rhs<kernels::omp::site_rhs>)->Name("site_rhs/omp")->RangeMultiplier(8)->Range(64, 1 << 18);
BENCHMARK(tangent_rhs<kernels::serial::tangent_rhs>)->Name("tangent_rhs/serial")->RangeMultiplier(8)->Range(64, 1 << 18);
BENCHMARK(tangent_rhs<kernels::omp::tangent_rhs>)->Name("tangent_rhs/omp")->RangeMultiplier(8)->Range(64, 1 << 18);
BENCHMARK(momentum_rhs<kernels::serial::momentum_rhs>)->Name("momentum_rhs/serial")->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(momentum_rhs<kernels::omp::momentum_rhs>)->Name("momentum_rhs/omp")->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(nonlinear_diffusion<kernels::serial::nonlinear_diffusion_step>)->Name("nonlinear_diffusion/serial")->RangeMultiplier(8)->Range(512, 1 << 18);
BENCHMARK(nonlinear_diffusion<kernels::omp::nonlinear_diffusion_step>)->Name("nonlinear_diffusion/omp")->RangeMultiplier(8)->Range(512, 1 << 18);

BENCHMARK_MAIN();
