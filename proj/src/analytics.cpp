#include "tbec/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace tbec {

double revival_time(double g, double alpha) {
  const double ga = g * alpha;
  if (!(ga > 0.0)) throw Error("revival time needs g * alpha > 0");
  return 2.0 * std::numbers::pi / ga;
}

RevivalStructure revival_structure(double g, double alpha, int max_denominator) {
  RevivalStructure r;
  r.T_rev = revival_time(g, alpha);
  r.fractions.push_back({1, 1});
  for (int n = 2; n <= max_denominator; ++n)
    for (int m = 1; m < n; ++m)
      if (std::gcd(m, n) == 1) r.fractions.push_back({m, n});
  return r;
}

LatticeState frozen_phase_state(const LatticeState& initial, double g, double t) {
  LatticeState out = initial;
  for (auto& a : out.amplitudes) a *= std::polar(1.0, -g * std::norm(a) * t);
  out.time = initial.time + t;
  return out;
}

Amplitudes gauss_sum_spectrum(const ThomasFermiSpec& tf, double g, double t, int L) {
  if (L < 2 * tf.half_width + 1) throw Error("lattice too small for the Thomas-Fermi support");
  // Quadratic phases are reduced modulo 2 pi in exact integer arithmetic on l^2
  // so that t = T_rev reproduces t = 0 to machine precision.
  const double ga_t = g * tf.alpha * t;
  const double turns = ga_t / (2.0 * std::numbers::pi);
  Amplitudes a(L, cplx{});
  for (int l = -tf.half_width; l <= tf.half_width; ++l) {
    const double frac = std::remainder(turns * static_cast<double>(l * l), 1.0);
    a[l + L / 2] = tf.amplitude(l) * std::polar(1.0, 2.0 * std::numbers::pi * frac);
  }
  Amplitudes b = bloch_transform(a);
  const double w = std::sqrt(norm_squared(b));
  const cplx global = std::polar(1.0 / w, -g * tf.beta * t);
  for (auto& z : b) z *= global;
  return b;
}

cplx uniform_closed_form(double J, double F, double g, int L, double t) {
  if (!(F > 0.0)) throw Error("uniform closed form needs F > 0");
  return std::polar(1.0, (J / F) * std::sin(F * t) - (g / L) * t);
}

double bhattacharyya(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error("distributions differ in length");
  double sp = 0.0, sq = 0.0, s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sp += p[i];
    sq += q[i];
    s += std::sqrt(std::max(p[i], 0.0) * std::max(q[i], 0.0));
  }
  if (!(sp > 0.0 && sq > 0.0)) throw Error("Bhattacharyya overlap of an empty distribution");
  return s / std::sqrt(sp * sq);
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw Error("correlation needs equal nonempty lengths");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

CoherenceResult coherence_time(const ObservableSeries& series, const CarpetReference& reference,
                               const CoherenceOptions& options) {
  CoherenceResult out;
  if (series.empty()) throw Error("coherence time of an empty series");
  const double T_rev = reference.revival.T_rev;
  out.fidelity.reserve(series.size());
  for (std::size_t r = 0; r < series.size(); ++r) {
    const auto& p = series.spectra[r];
    if (static_cast<int>(p.size()) != reference.L) throw Error("series record lacks spectra");
    const auto q = spectrum_weights(
        gauss_sum_spectrum(reference.tf, reference.g, series.times[r], reference.L));
    out.fidelity.push_back(options.metric == CoherenceMetric::Pearson ? pearson_correlation(p, q)
                                                                      : bhattacharyya(p, q));
  }
  const double dwell = options.dwell * T_rev;
  const double horizon = series.times.back();
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (out.fidelity[i] >= options.threshold) continue;
    const double t0 = series.times[i];
    if (t0 + dwell > horizon) break;
    bool stays = true;
    for (std::size_t j = i; j < series.size() && series.times[j] <= t0 + dwell; ++j)
      if (out.fidelity[j] >= options.threshold) {
        stays = false;
        break;
      }
    if (stays) {
      out.time = t0;
      return out;
    }
  }
  out.time = horizon;
  out.censored = true;
  return out;
}

std::vector<double> lyapunov_series(std::span<const double> times,
                                    std::span<const double> log_magnitude) {
  if (times.size() != log_magnitude.size()) throw Error("lyapunov series length mismatch");
  std::vector<double> lam(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw Error("finite-time Lyapunov exponent needs t > 0");
    lam[i] = log_magnitude[i] / times[i];
  }
  return lam;
}

PlateauStats plateau(std::span<const double> times, std::span<const double> values, double t_from,
                     double t_to) {
  double s = 0.0, s2 = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_from || times[i] > t_to) continue;
    s += values[i];
    s2 += values[i] * values[i];
    ++n;
  }
  if (n < 2) throw Error("plateau window holds fewer than two samples");
  PlateauStats st;
  st.mean = s / n;
  st.stddev = std::sqrt(std::max(0.0, (s2 - n * st.mean * st.mean) / (n - 1)));
  return st;
}

namespace {

struct LogPoints {
  std::vector<double> x, y;
};

LogPoints log_points(std::span<const double> t, std::span<const double> y,
                     std::pair<double, double> window) {
  if (t.size() != y.size()) throw Error("fit input length mismatch");
  if (!(window.first > 0.0) || !(window.second > window.first))
    throw Error("fit window must satisfy 0 < t_min < t_max");
  LogPoints p;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window.first || t[i] > window.second) continue;
    if (!(y[i] > 0.0)) throw Error("power-law fit needs positive values");
    p.x.push_back(std::log(t[i]));
    p.y.push_back(std::log(y[i]));
  }
  if (static_cast<int>(p.x.size()) < kMinFitPoints)
    throw Error("power-law fit window holds " + std::to_string(p.x.size()) +
                " points, need at least " + std::to_string(kMinFitPoints));
  return p;
}

}  // namespace

FitResult fit_power_law(std::span<const double> t, std::span<const double> y,
                        std::pair<double, double> window) {
  const LogPoints p = log_points(t, y, window);
  const double n = static_cast<double>(p.x.size());
  const double mx = std::accumulate(p.x.begin(), p.x.end(), 0.0) / n;
  const double my = std::accumulate(p.y.begin(), p.y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    sxx += (p.x[i] - mx) * (p.x[i] - mx);
    sxy += (p.x[i] - mx) * (p.y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error("power-law fit window spans a single time");
  FitResult f;
  f.exponent = sxy / sxx;
  const double intercept = my - f.exponent * mx;
  f.prefactor = std::exp(intercept);
  double r2 = 0.0;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    const double r = p.y[i] - (intercept + f.exponent * p.x[i]);
    r2 += r * r;
  }
  f.residual = std::sqrt(r2 / n);
  f.fit_window = window;
  f.points = static_cast<int>(p.x.size());
  return f;
}

FitResult fit_prefactor(std::span<const double> t, std::span<const double> y,
                        std::pair<double, double> window, double exponent) {
  const LogPoints p = log_points(t, y, window);
  const double n = static_cast<double>(p.x.size());
  double intercept = 0.0;
  for (std::size_t i = 0; i < p.x.size(); ++i) intercept += p.y[i] - exponent * p.x[i];
  intercept /= n;
  double r2 = 0.0;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    const double r = p.y[i] - (intercept + exponent * p.x[i]);
    r2 += r * r;
  }
  FitResult f;
  f.exponent = exponent;
  f.prefactor = std::exp(intercept);
  f.residual = std::sqrt(r2 / n);
  f.fit_window = window;
  f.points = static_cast<int>(p.x.size());
  return f;
}

std::pair<double, double> default_fit_window(std::span<const double> t,
                                             std::span<const double> y) {
  if (t.empty() || t.size() != y.size()) throw Error("fit window of an empty series");
  const double t_end = t.back();
  double t_min = t_end / std::sqrt(10.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::abs(y[i] - y[0]) > 0.05 * std::abs(y[0])) {
      t_min = std::max(t_min, t[i]);
      break;
    }
  }
  return {t_min, t_end};
}

int count_peaks(std::span<const double> w, double rel_threshold) {
  const std::size_t n = w.size();
  if (n < 3) return 0;
  const double top = *std::max_element(w.begin(), w.end());
  int peaks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = w[(i + n - 1) % n];
    const double next = w[(i + 1) % n];
    if (w[i] > prev && w[i] >= next && w[i] > rel_threshold * top) ++peaks;
  }
  return peaks;
}

}  // namespace tbec
