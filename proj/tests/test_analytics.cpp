#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tbec/analytics.hpp"

using namespace tbec;

namespace {

std::vector<double> tf_weights_at(double g, double alpha, double t, int L) {
  return spectrum_weights(gauss_sum_spectrum(thomas_fermi_spec(alpha), g, t, L));
}

}  // namespace

TEST_CASE("revival time and fractions") {
  CHECK(revival_time(10.0, 0.001) == doctest::Approx(628.3185307179586));
  CHECK_THROWS_AS(revival_time(0.0, 0.001), Error);
  CHECK_THROWS_AS(revival_time(10.0, -0.1), Error);
  const auto r = revival_structure(10.0, 0.001, 4);
  REQUIRE(r.fractions.size() == 6);
  CHECK(r.fractions[0].m == 1);
  CHECK(r.fractions[0].n == 1);
  CHECK(r.fractions[1].m == 1);
  CHECK(r.fractions[1].n == 2);
  for (const auto& f : r.fractions) CHECK(std::gcd(f.m, f.n) == 1);
}

TEST_CASE("frozen-phase state keeps populations") {
  const ModelParams p{1.0, 10.0, 100.0, 32};
  const auto s0 = thomas_fermi_init(0.01, p);
  const auto s = frozen_phase_state(s0, 10.0, 3.0);
  CHECK(s.time == 3.0);
  const auto P = populations(s.amplitudes), P0 = populations(s0.amplitudes);
  for (int j = 0; j < p.L; ++j) CHECK(P[j] == doctest::Approx(P0[j]).epsilon(1e-15));
  const int j = p.index(2);
  CHECK(std::arg(s.amplitudes[j]) ==
        doctest::Approx(std::remainder(-10.0 * std::norm(s0.amplitudes[j]) * 3.0, 2 * oracle::pi)));
}

TEST_CASE("Gauss-sum spectrum equals the direct DFT of the frozen-phase state") {
  const ModelParams p{1.0, 10.0, 100.0, 64};
  const auto s0 = thomas_fermi_init(0.001, p);
  for (double t : {0.0, 13.7, 200.0}) {
    const auto w = tf_weights_at(10.0, 0.001, t, 64);
    const auto ref = spectrum_weights(oracle::dft(frozen_phase_state(s0, 10.0, t).amplitudes));
    for (int q = 0; q < 64; ++q) CHECK(std::abs(w[q] - ref[q]) < 1e-12);
  }
}

TEST_CASE("Gauss-sum spectrum revives exactly and shifts by half a zone at T_rev/2") {
  const double T = revival_time(10.0, 0.001);
  const auto w0 = tf_weights_at(10.0, 0.001, 0.0, 64);
  const auto w1 = tf_weights_at(10.0, 0.001, T, 64);
  const auto wh = tf_weights_at(10.0, 0.001, 0.5 * T, 64);
  const auto shifted = half_zone_shift(w0);
  for (int q = 0; q < 64; ++q) {
    CHECK(std::abs(w1[q] - w0[q]) < 1e-12);
    CHECK(std::abs(wh[q] - shifted[q]) < 1e-12);
  }
  CHECK(bhattacharyya(w1, w0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(count_peaks(w0) == 1);
  CHECK(count_peaks(tf_weights_at(10.0, 0.001, T / 3.0, 64)) == 3);
}

TEST_CASE("uniform closed form") {
  const cplx b = uniform_closed_form(1.0, 100.0, 10.0, 16, 0.3);
  CHECK(std::abs(b) == doctest::Approx(1.0));
  CHECK(std::arg(b) == doctest::Approx(std::sin(30.0) / 100.0 - 10.0 * 0.3 / 16));
  CHECK_THROWS_AS(uniform_closed_form(1.0, 0.0, 10.0, 16, 0.3), Error);
}

TEST_CASE("overlap and correlation measures") {
  const std::vector<double> p{0.25, 0.25, 0.5}, q{0.5, 0.5, 0.0};
  CHECK(bhattacharyya(p, p) == doctest::Approx(1.0));
  CHECK(bhattacharyya(p, q) == doctest::Approx(2.0 * std::sqrt(0.125)));
  CHECK(bhattacharyya(std::vector<double>{2, 2, 4}, p) == doctest::Approx(1.0));
  CHECK_THROWS_AS(bhattacharyya(p, std::vector<double>{1, 0}), Error);
  CHECK(pearson_correlation(p, p) == doctest::Approx(1.0));
  CHECK(pearson_correlation(p, q) == doctest::Approx(-1.0));
  CHECK(pearson_correlation(p, std::vector<double>{1, 1, 1}) == 0.0);
}

TEST_CASE("coherence time on synthetic series") {
  const int L = 64;
  const double g = 10.0, alpha = 0.001;
  const CarpetReference ref{thomas_fermi_spec(alpha), g, L, revival_structure(g, alpha)};
  const double T = ref.revival.T_rev;
  ObservableSeries s;
  s.L = L;
  const auto flat = std::vector<double>(L, 1.0 / L);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i <= 200; ++i) {
    const double t = i * T / 200;
    s.times.push_back(t);
    if (t < 0.3 * T) {
      s.spectra.push_back(tf_weights_at(g, alpha, t, L));
    } else {
      std::vector<double> w(L);
      for (auto& x : w) x = u(rng);
      s.spectra.push_back(w);
    }
  }
  const auto r = coherence_time(s, ref);
  CHECK_FALSE(r.censored);
  CHECK(r.time / T == doctest::Approx(0.3).epsilon(0.02));
  CHECK(r.fidelity[0] == doctest::Approx(1.0));

  ObservableSeries c;
  c.L = L;
  for (int i = 0; i <= 20; ++i) {
    c.times.push_back(i * T / 20);
    c.spectra.push_back(tf_weights_at(g, alpha, c.times.back(), L));
  }
  const auto rc = coherence_time(c, ref);
  CHECK(rc.censored);
  CHECK(rc.time == doctest::Approx(T));
  const auto rb = coherence_time(c, ref, {CoherenceMetric::Bhattacharyya, 0.5, 0.02});
  CHECK(rb.censored);
  (void)flat;
}

TEST_CASE("Lyapunov series and plateau") {
  const std::vector<double> t{1, 2, 4, 8}, lm{0.5, 1.0, 2.0, 4.0};
  const auto lam = lyapunov_series(t, lm);
  for (double x : lam) CHECK(x == doctest::Approx(0.5));
  CHECK_THROWS_AS(lyapunov_series(std::vector<double>{0.0}, std::vector<double>{1.0}), Error);
  const auto st = plateau(t, std::vector<double>{1, 2, 3, 5}, 2.0, 8.0);
  CHECK(st.mean == doctest::Approx(10.0 / 3));
  CHECK(st.stddev > 0.0);
  CHECK_THROWS_AS(plateau(t, lam, 20.0, 30.0), Error);
}

TEST_CASE("power-law fit recovers exact laws and matches ordinary least squares") {
  std::vector<double> t, y, lx, ly;
  std::mt19937 rng(3);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (int i = 1; i <= 100; ++i) {
    t.push_back(i);
    y.push_back(2.5 * std::pow(i, 0.5) * std::exp(noise(rng)));
    lx.push_back(std::log(t.back()));
    ly.push_back(std::log(y.back()));
  }
  const auto f = fit_power_law(t, y, {1.0, 100.0});
  const auto [slope, icpt] = oracle::line_fit(lx, ly);
  CHECK(f.exponent == doctest::Approx(slope).epsilon(1e-12));
  CHECK(f.prefactor == doctest::Approx(std::exp(icpt)).epsilon(1e-12));
  CHECK(f.points == 100);
  CHECK(f.exponent == doctest::Approx(0.5).epsilon(0.02));

  // Rescaling y changes only the prefactor; rescaling t shifts it by c^-p.
  std::vector<double> y3(y), t7(t);
  for (auto& v : y3) v *= 3.0;
  for (auto& v : t7) v *= 7.0;
  const auto f3 = fit_power_law(t, y3, {1.0, 100.0});
  const auto f7 = fit_power_law(t7, y, {7.0, 700.0});
  CHECK(f3.exponent == doctest::Approx(f.exponent).epsilon(1e-12));
  CHECK(f3.prefactor == doctest::Approx(3.0 * f.prefactor).epsilon(1e-12));
  CHECK(f7.exponent == doctest::Approx(f.exponent).epsilon(1e-12));
  CHECK(f7.prefactor == doctest::Approx(f.prefactor * std::pow(7.0, -f.exponent)).epsilon(1e-10));

  const auto fp = fit_prefactor(t, y, {1.0, 100.0}, 0.5);
  CHECK(fp.exponent == 0.5);
  CHECK(fp.prefactor == doctest::Approx(2.5).epsilon(0.01));

  CHECK_THROWS_AS(fit_power_law(t, y, {1.0, 5.0}), Error);
  std::vector<double> neg(y);
  neg[50] = -1.0;
  CHECK_THROWS_AS(fit_power_law(t, neg, {1.0, 100.0}), Error);
}

TEST_CASE("default fit window is the last half-decade") {
  std::vector<double> t, y;
  for (int i = 0; i <= 1000; ++i) {
    t.push_back(i);
    y.push_back(1.0 + std::sqrt(double(i)));
  }
  const auto w = default_fit_window(t, y);
  CHECK(w.first == doctest::Approx(1000.0 / std::sqrt(10.0)));
  CHECK(w.second == 1000.0);
  std::vector<double> late(y);
  for (int i = 0; i < 500; ++i) late[i] = 1.0;
  CHECK(default_fit_window(t, late).first == doctest::Approx(500.0));
}

TEST_CASE("peak counting on the ring") {
  CHECK(count_peaks(std::vector<double>{0, 1, 0, 0, 1, 0}) == 2);
  CHECK(count_peaks(std::vector<double>{1, 0, 0, 0, 0, 0.9}) == 1);
  CHECK(count_peaks(std::vector<double>{0, 1, 0, 0.1, 0, 0}) == 1);
  CHECK(count_peaks(std::vector<double>{1, 1}) == 0);
}

TEST_CASE("timescale examples") {
  CHECK(revival_time(1.0, 2.0 * oracle::pi) == doctest::Approx(1.0));
  const ModelParams p{1.0, 10.0, 100.0, 64};
  CHECK(revival_time(10.0, 0.001) / p.bloch_period() == doctest::Approx(1e4));
}

TEST_CASE("uniform closed form at t = 0 and t = T_B") {
  CHECK(std::abs(uniform_closed_form(1.0, 100.0, 10.0, 16, 0.0) - 1.0) < 1e-15);
  const double TB = 2.0 * oracle::pi / 100.0;
  CHECK(std::abs(uniform_closed_form(1.0, 100.0, 10.0, 16, TB) - std::polar(1.0, -10.0 / 16 * TB)) <
        1e-14);
}

TEST_CASE("frozen phase is the identity at t = 0 and a global phase for a uniform state") {
  const ModelParams p{1.0, 10.0, 100.0, 16};
  const auto tf = thomas_fermi_init(0.05, p);
  CHECK(frozen_phase_state(tf, 10.0, 0.0).amplitudes == tf.amplitudes);
  const auto u = uniform_init(p);
  const auto f = frozen_phase_state(u, 10.0, 2.3);
  for (int j = 0; j < 16; ++j) CHECK(std::abs(f.amplitudes[j] - f.amplitudes[0]) < 1e-15);
}

TEST_CASE("Gauss-sum spectrum at t = 0 is the Bloch spectrum of the Thomas-Fermi state") {
  const ModelParams p{1.0, 10.0, 100.0, 64};
  const auto b = gauss_sum_spectrum(thomas_fermi_spec(0.001), 10.0, 0.0, 64);
  const auto ref = bloch_transform(thomas_fermi_init(0.001, p).amplitudes);
  for (int q = 0; q < 64; ++q) CHECK(std::abs(b[q] - ref[q]) < 1e-15);
}

TEST_CASE("Gauss-sum magnitudes are periodic in T_rev") {
  const double T = revival_time(10.0, 0.001);
  for (double t : {17.0, 123.4, 400.0}) {
    const auto a = tf_weights_at(10.0, 0.001, t, 64);
    const auto b = tf_weights_at(10.0, 0.001, t + 3.0 * T, 64);
    for (int q = 0; q < 64; ++q) CHECK(std::abs(a[q] - b[q]) < 1e-12);
  }
}

TEST_CASE("fits of exact laws") {
  std::vector<double> t, y, c;
  for (int i = 1; i <= 50; ++i) {
    t.push_back(i * 0.5);
    y.push_back(3.2 * std::sqrt(t.back()));
    c.push_back(7.0);
  }
  const auto f = fit_power_law(t, y, {0.5, 100.0});
  CHECK(f.exponent == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.prefactor == doctest::Approx(3.2).epsilon(1e-12));
  CHECK(f.residual < 1e-12);
  const auto fc = fit_power_law(t, c, {0.5, 100.0});
  CHECK(std::abs(fc.exponent) < 1e-12);
  CHECK(fc.prefactor == doctest::Approx(7.0));
}
