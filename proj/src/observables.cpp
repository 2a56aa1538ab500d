#include "tbec/observables.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace tbec {

namespace {

// FFTW planning is not thread-safe; execution with new arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }
  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find({n, sign});
    if (it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (!plan) throw Error("FFTW planning failed for n = " + std::to_string(n));
    plans_.emplace(std::pair{n, sign}, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

void execute(std::span<const cplx> in, std::span<cplx> out, int sign) {
  std::vector<cplx> buf(in.begin(), in.end());
  fftw_execute_dft(plans().get(static_cast<int>(in.size()), sign),
                   reinterpret_cast<fftw_complex*>(buf.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

Amplitudes bloch_transform(std::span<const cplx> a) {
  const int L = static_cast<int>(a.size());
  if (L == 0 || L % 2 != 0) throw Error("Bloch transform needs an even, nonempty lattice");
  Amplitudes raw(L);
  execute(a, raw, FFTW_FORWARD);
  // Storage slot j = l + L/2 contributes exp(-i kappa (j - L/2)) = (-1)^k exp(-2 pi i k j / L).
  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  const int half = L / 2;
  Amplitudes b(L);
  for (int q = 0; q < L; ++q) {
    const int k = q - half;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    b[q] = sign * scale * raw[(k + L) % L];
  }
  return b;
}

Amplitudes inverse_bloch_transform(std::span<const cplx> b) {
  const int L = static_cast<int>(b.size());
  if (L == 0 || L % 2 != 0) throw Error("Bloch transform needs an even, nonempty lattice");
  const int half = L / 2;
  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  Amplitudes raw(L);
  for (int q = 0; q < L; ++q) {
    const int k = q - half;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    raw[(k + L) % L] = sign * scale * b[q];
  }
  Amplitudes a(L);
  execute(raw, a, FFTW_BACKWARD);
  return a;
}

Amplitudes bloch_spectrum(const LatticeState& state, const ModelParams& params) {
  if (state.frame == Frame::Gauge) return bloch_transform(state.amplitudes);
  return bloch_transform(to_frame(state, Frame::Gauge, params).amplitudes);
}

std::vector<double> spectrum_weights(std::span<const cplx> b) { return populations(b); }

double quasimomentum(int q, int L) {
  return 2.0 * std::numbers::pi * static_cast<double>(q - L / 2) / L;
}

double mean_position(std::span<const double> P) {
  const int half = static_cast<int>(P.size()) / 2;
  double m = 0.0;
  for (std::size_t j = 0; j < P.size(); ++j) m += static_cast<double>(static_cast<int>(j) - half) * P[j];
  return m;
}

double dispersion(std::span<const double> P) {
  const int half = static_cast<int>(P.size()) / 2;
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < P.size(); ++j) {
    const double l = static_cast<int>(j) - half;
    m1 += l * P[j];
    m2 += l * l * P[j];
  }
  return m2 - m1 * m1;
}

double fluctuation(std::span<const double> P) {
  const std::size_t n = P.size();
  double c = 0.0;
  for (std::size_t j = 0; j < n; ++j) c += std::abs(P[(j + 1) % n] - P[j]);
  return c;
}

double edge_population(std::span<const double> P, int band) {
  const int n = static_cast<int>(P.size());
  band = std::min(band, n / 2);
  double s = 0.0;
  for (int j = 0; j < band; ++j) s += P[j] + P[n - 1 - j];
  return s;
}

double energy(const LatticeState& state, const ModelParams& params) {
  if (state.frame != Frame::Static) throw FrameMismatch("energy is defined in the static frame");
  const int L = params.L;
  if (state.size() != L) throw Error("state size does not match L");
  const auto& a = state.amplitudes;
  double tilt = 0.0, hop = 0.0, inter = 0.0;
  for (int j = 0; j < L; ++j) {
    const double p = std::norm(a[j]);
    tilt += params.F * params.site(j) * p;
    inter += p * p;
    if (j + 1 < L) hop += 2.0 * std::real(std::conj(a[j + 1]) * a[j]);
  }
  const cplx twist = std::polar(1.0, params.F * L * state.time);
  hop += 2.0 * std::real(std::conj(a[0]) * a[L - 1] * twist);
  return tilt - 0.5 * params.J * hop + 0.5 * params.g * inter;
}

void ObservableSeries::record(const LatticeState& state, const ModelParams& params,
                              const TangentState* tangent, ObservableSelection select) {
  if (!times.empty() && !(state.time > times.back()))
    throw Error("observable series times must be strictly increasing");
  if (L == 0) L = params.L;
  const auto P = tbec::populations(state.amplitudes);
  times.push_back(state.time);
  dispersion.push_back(tbec::dispersion(P));
  fluctuation.push_back(tbec::fluctuation(P));
  norm.push_back(norm_squared(state.amplitudes));
  energy.push_back(tbec::energy(to_frame(state, Frame::Static, params), params));
  if (tangent) log_tangent.push_back(tangent->log_norm());
  spectra.push_back(select.spectrum ? spectrum_weights(bloch_spectrum(state, params))
                                    : std::vector<double>{});
  populations.push_back(select.populations ? P : std::vector<double>{});
}

namespace {

void check_uniform(const std::vector<double>& t) {
  if (t.size() < 3) return;
  const double step = t[1] - t[0];
  for (std::size_t i = 2; i < t.size(); ++i)
    if (std::abs((t[i] - t[i - 1]) - step) > 1e-9 * std::max(1.0, std::abs(t[i])))
      throw Error("carpet grid requires a uniform time grid");
}

TimeGrid make_grid(const ObservableSeries& series,
                   const std::vector<std::vector<double>>& rows, double time_unit) {
  TimeGrid g;
  if (series.empty()) return g;
  check_uniform(series.times);
  g.cols = static_cast<std::size_t>(series.L);
  for (std::size_t r = 0; r < series.size(); ++r) {
    if (rows[r].size() != g.cols) throw Error("series record lacks the requested observable");
    g.times.push_back(series.times[r] / time_unit);
    g.values.insert(g.values.end(), rows[r].begin(), rows[r].end());
  }
  return g;
}

}  // namespace

TimeGrid carpet_grid(const ObservableSeries& series, double time_unit) {
  return make_grid(series, series.spectra, time_unit);
}

TimeGrid population_grid(const ObservableSeries& series, double time_unit) {
  return make_grid(series, series.populations, time_unit);
}

std::vector<double> trailing_average(const ObservableSeries& series, double window) {
  if (series.empty()) throw Error("trailing average of an empty series");
  const double cutoff = series.times.back() - window;
  std::vector<double> avg(series.L, 0.0);
  int count = 0;
  for (std::size_t r = 0; r < series.size(); ++r) {
    if (series.times[r] < cutoff - 1e-9 * std::abs(cutoff)) continue;
    const auto& P = series.populations[r];
    if (P.size() != avg.size()) throw Error("series record lacks populations");
    for (std::size_t j = 0; j < avg.size(); ++j) avg[j] += P[j];
    ++count;
  }
  for (auto& v : avg) v /= count;
  return avg;
}

std::vector<double> half_zone_shift(std::span<const double> weights) {
  const std::size_t n = weights.size();
  std::vector<double> out(n);
  for (std::size_t q = 0; q < n; ++q) out[(q + n / 2) % n] = weights[q];
  return out;
}

}  // namespace tbec
