// Acceptance gate: one line per criterion, nonzero exit if any check fails.

#include <CLI11.hpp>

#include <cstdio>
#include <future>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tbec/analytics.hpp"
#include "tbec/ndiff.hpp"
#include "tbec/propagator.hpp"
#include "tbec/scenario.hpp"

using namespace tbec;
namespace fs = std::filesystem;

namespace {

struct Check {
  std::string id;
  std::string what;
  bool pass = false;
  std::string detail;
};

std::vector<Check> g_checks;

void report(const std::string& id, const std::string& what, bool pass, const std::string& detail) {
  g_checks.push_back({id, what, pass, detail});
  std::printf("[%s] %-4s %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), what.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

fs::path g_workdir;

ScenarioConfig in_workdir(ScenarioConfig c, const std::string& tag) {
  c.output_dir = g_workdir / tag;
  return c;
}

// Gauge-frame fig1/fig2 regime with the same step rule as the built-ins.
ScenarioConfig carpet_config(double F) {
  ScenarioConfig c = builtin_scenario("fig2");
  c.params.F = F;
  c.integrator.dt = std::min(c.params.bloch_period(), 1.0) / 400.0;
  c.name = "carpet_F" + format_double(F);
  return in_workdir(c, c.name);
}

// ---------------------------------------------------------------------------

void criterion1() {
  std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4"};
  std::vector<std::future<RunResult>> jobs;
  for (const auto& n : names)
    jobs.push_back(std::async(std::launch::async, [n] {
      return run_scenario(in_workdir(builtin_scenario(n), "c1_" + n));
    }));
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto r = jobs[i].get();
    const auto& cons = r.report["conservation"];
    const double norm_rate = cons["norm_drift_per_time"].get<double>();
    const double e_rel = cons["max_energy_rel_drift"].get<double>();
    report("1", names[i] + " norm drift per unit time", norm_rate <= 1e-9,
           fmt("%.3e (<= 1e-9)", norm_rate));
    report("1", names[i] + " relative energy drift", e_rel <= 1e-8, fmt("%.3e (<= 1e-8)", e_rel));
  }
}

void criterion2() {
  const ModelParams p{1.0, 10.0, 100.0, 16};
  const auto s0 = to_frame(uniform_init(p), Frame::Gauge, p);
  std::vector<double> times;
  for (int i = 0; i <= 2000; ++i) times.push_back(10.0 * p.bloch_period() * i / 2000);
  double worst = 0.0, leak = 0.0;
  Observation obs{times, [&](const LatticeState& s, const TangentState*) {
                    const auto b = oracle::dft(s.amplitudes);
                    const cplx ref = std::polar(1.0, (p.J / p.F) * std::sin(p.F * s.time) -
                                                         (p.g / p.L) * s.time);
                    worst = std::max(worst, std::abs(b[p.L / 2] - ref));
                    for (int q = 0; q < p.L; ++q)
                      if (q != p.L / 2) leak = std::max(leak, std::abs(b[q]));
                  }};
  propagate(s0, p, IntegratorConfig{}, times.back(), obs);
  report("2", "uniform closed form b_0(t) over 10 T_B", worst <= 1e-6, fmt("max error %.3e (<= 1e-6)", worst));
  report("2", "uniform closed form other modes", leak < 1e-8, fmt("max |b_k| %.3e (< 1e-8)", leak));
}

void criterion3() {
  const auto r = run_scenario(in_workdir(builtin_scenario("fig1"), "c3_fig1"));
  const auto& res = r.report["results"];
  const double dev = res["max_population_deviation_rel"].get<double>();
  report("3a", "fig1 populations frozen", dev <= 0.05, fmt("max|dP|/max P(0) = %.4f (<= 0.05)", dev));
  const double fid = res["revival_fidelity"].get<double>();
  report("3b", "fig1 carpet fidelity at T_rev", fid >= 0.95, fmt("Bhattacharyya %.4f (>= 0.95)", fid));
  const double half = res["half_revival_fidelity"].get<double>();
  report("3c", "fig1 half-zone-shifted fidelity at T_rev/2", half >= 0.9,
         fmt("Bhattacharyya %.4f (>= 0.9)", half));
}

void criterion4() {
  const std::vector<double> Fs{10.0, 20.0, 40.0};
  std::vector<std::future<RunResult>> jobs;
  for (double F : Fs)
    jobs.push_back(std::async(std::launch::async, [F] { return run_scenario(carpet_config(F)); }));
  std::vector<double> tc;
  for (auto& j : jobs) {
    const auto r = j.get();
    const auto& c = r.report["results"]["coherence_time"];
    tc.push_back(c["in_T_rev"].get<double>());
    if (c["censored"].get<bool>()) tc.back() = std::numeric_limits<double>::quiet_NaN();
  }
  report("4", "F=10 coherence time", tc[0] >= 0.1 && tc[0] <= 0.3,
         fmt("T_coh = %.4f T_rev (in [0.1, 0.3])", tc[0]));
  const bool increasing = tc[0] < tc[1] && tc[1] < tc[2];
  report("4", "T_coh increases with F", increasing,
         fmt("T_coh/T_rev = %.4f, %.4f, %.4f at F = 10, 20, 40", tc[0], tc[1], tc[2]));
  const double corr = pearson_correlation(Fs, tc);
  report("4", "T_coh correlation with F", corr >= 0.9, fmt("Pearson r = %.4f (>= 0.9)", corr));
}

struct LyapunovRun {
  std::vector<double> times, log_norm;
};

LyapunovRun lyapunov_run(double F, int L, double n_bloch, std::uint64_t seed) {
  const ModelParams p{1.0, 10.0, F, L};
  const auto s0 = to_frame(thomas_fermi_init(0.001, p), Frame::Gauge, p);
  LyapunovRun out;
  for (int i = 1; i <= static_cast<int>(n_bloch); ++i) out.times.push_back(i * p.bloch_period());
  Observation obs{out.times, [&](const LatticeState&, const TangentState* t) {
                    out.log_norm.push_back(t->log_norm());
                  }};
  propagate_with_tangent(s0, random_tangent(L, seed), p, IntegratorConfig{}, out.times.back(), obs);
  return out;
}

void criterion5(double chaotic_horizon) {
  auto a = std::async(std::launch::async, [=] { return lyapunov_run(0.25, 512, chaotic_horizon, 1); });
  auto b = std::async(std::launch::async, [=] { return lyapunov_run(0.25, 512, chaotic_horizon, 2); });
  const auto regular = lyapunov_run(100.0, 64, 500, 1);
  const auto ra = a.get(), rb = b.get();
  std::vector<PlateauStats> st;
  for (const auto* r : {&ra, &rb}) {
    const auto lam = lyapunov_series(r->times, r->log_norm);
    st.push_back(plateau(r->times, lam, 0.5 * r->times.back(), r->times.back()));
  }
  const double T_B = ModelParams{1.0, 10.0, 0.25, 512}.bloch_period();
  for (int s = 0; s < 2; ++s)
    report("5", "F=0.25 positive plateau, seed " + std::to_string(s + 1),
           st[s].mean > 0.0 && st[s].mean > 5.0 * st[s].stddev,
           fmt("lambda = %.5f +- %.5f over [%.0f, ", st[s].mean, st[s].stddev, 0.5 * chaotic_horizon) +
               fmt("%.0f] T_B (mean > 5 sigma)", ra.times.back() / T_B));
  const double agree = std::abs(st[0].mean - st[1].mean) / (0.5 * (st[0].mean + st[1].mean));
  report("5", "F=0.25 seeds agree", agree <= 0.1, fmt("relative difference %.4f (<= 0.1)", agree));
  // Regular regime: the tangent grows at most polynomially, so lambda*t = ln|da|
  // stays below ln 100 over 500 T_B, while an exponent of the chaotic size
  // would reach lambda * 500 T_B.
  double max_lt = -1e300;
  for (double x : regular.log_norm) max_lt = std::max(max_lt, x);
  const double bound = std::log(100.0);
  report("5", "F=100 lambda(t) t bounded over 500 T_B", max_lt <= bound,
         fmt("max lambda t = %.3f (<= ln 100 = %.3f); chaotic-rate equivalent %.1f", max_lt, bound,
             st[0].mean * regular.times.back()));
}

struct SubdiffusionRun {
  std::vector<double> times, M;
};

SubdiffusionRun subdiffusion_run(double F, double t_end) {
  ScenarioConfig c = builtin_scenario("fig3");
  c.params.F = F;
  c.unit = TimeUnit::Natural;
  c.horizon = t_end;
  c.samples_per_unit = 0.25 / ModelParams{1.0, 10.0, 0.25, 512}.bloch_period();
  c.name = "sub_F" + format_double(F);
  const auto r = run_scenario(in_workdir(c, c.name));
  SubdiffusionRun out;
  out.times.assign(r.series.times.begin() + 1, r.series.times.end());
  out.M.assign(r.series.dispersion.begin() + 1, r.series.dispersion.end());
  return out;
}

FitResult tail_fit(const SubdiffusionRun& r, double t_end) {
  std::vector<double> t, M;
  for (std::size_t i = 0; i < r.times.size() && r.times[i] <= t_end * (1 + 1e-12); ++i) {
    t.push_back(r.times[i]);
    M.push_back(r.M[i]);
  }
  return fit_power_law(t, M, default_fit_window(t, M));
}

void criterion6(double n_bloch) {
  const double T_B = ModelParams{1.0, 10.0, 0.25, 512}.bloch_period();
  const double t_end = n_bloch * T_B;
  auto slow = std::async(std::launch::async, [=] { return subdiffusion_run(0.15, t_end); });
  const auto fast = subdiffusion_run(0.25, t_end);
  const auto weak = slow.get();

  const auto smoke = tail_fit(fast, 500.0 * T_B);
  report("6", "F=0.25 smoke exponent at 500 T_B", smoke.exponent >= 0.3 && smoke.exponent <= 0.7,
         fmt("p = %.4f over [%.0f, %.0f] T_B (in [0.3, 0.7])", smoke.exponent,
             smoke.fit_window.first / T_B, smoke.fit_window.second / T_B));
  const auto full = tail_fit(fast, t_end);
  report("6", "F=0.25 exponent over final half-decade", full.exponent >= 0.4 && full.exponent <= 0.6,
         fmt("p = %.4f over [%.0f, %.0f] T_B (in [0.4, 0.6])", full.exponent,
             full.fit_window.first / T_B, full.fit_window.second / T_B));
  const auto w_fast = default_fit_window(fast.times, fast.M);
  const auto w_weak = default_fit_window(weak.times, weak.M);
  const double A_fast = fit_prefactor(fast.times, fast.M, w_fast, 0.5).prefactor;
  const double A_weak = fit_prefactor(weak.times, weak.M, w_weak, 0.5).prefactor;
  report("6", "F=0.15 has the larger sqrt(t) prefactor", A_weak > A_fast,
         fmt("A(0.15) = %.4f vs A(0.25) = %.4f at t = %.0f", A_weak, A_fast, t_end));
}

void criterion7() {
  const auto tf_cfg = in_workdir(builtin_scenario("fig5"), "c7_tf");
  const auto tf = run_scenario(tf_cfg);
  const auto& res = tf.report["results"];
  if (!res.contains("dispersion_fit")) {
    report("7", "nonlinear diffusion scaling", false, res.dump());
    return;
  }
  const double pM = res["dispersion_fit"]["exponent"].get<double>();
  const double pR = res["radius_fit"]["exponent"].get<double>();
  report("7", "M exponent", pM >= 0.45 && pM <= 0.55, fmt("p_M = %.4f (in [0.45, 0.55])", pM));
  report("7", "radius exponent", pR >= 0.2 && pR <= 0.3, fmt("p_R = %.4f (in [0.2, 0.3])", pR));

  auto g_cfg = tf_cfg;
  g_cfg.initial.kind = InitialKind::Gaussian;
  g_cfg.initial.variance = dispersion(tf.diffusion->snapshots.front().P);
  g_cfg.output_dir = g_workdir / "c7_gauss";
  const auto gs = run_scenario(g_cfg);
  const double d = relative_l1(tf.diffusion->final.P, gs.diffusion->final.P);
  report("7", "Gaussian and Thomas-Fermi late-time profiles", d < 0.05,
         fmt("relative L1 = %.4f at t/2pi = %.0f (< 0.05)", d, tf_cfg.horizon));
}

void criterion8() {
  const ModelParams p{1.0, 10.0, 10.0, 16};
  const auto s0 = to_frame(thomas_fermi_init(0.02, p), Frame::Gauge, p);
  IntegratorConfig cfg;
  cfg.dt = p.bloch_period() / 1000;
  double worst = 0.0;
  Amplitudes b = oracle::dft(s0.amplitudes);
  LatticeState s = s0;
  double t = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double t1 = 0.5 * i * p.bloch_period();
    b = propagate_momentum(b, p, cfg, t, t1);
    s = propagate(s, p, cfg, t1);
    t = t1;
    const auto ref = oracle::dft(s.amplitudes);
    for (int q = 0; q < p.L; ++q) worst = std::max(worst, std::abs(b[q] - ref[q]));
  }
  report("8", "momentum vs site propagation over 5 T_B", worst <= 1e-6, fmt("max |db_k| = %.3e (<= 1e-6)", worst));
}

void criterion9() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int L = 16 + 8 * (k % 4);
    const ModelParams p{1.0, 10.0, k % 2 ? 0.25 : 10.0, L};
    const Frame f = k % 3 ? Frame::Gauge : Frame::Static;
    LatticeState s{Amplitudes(L), 0.37 * k, f};
    Amplitudes d(L);
    for (auto& z : s.amplitudes) z = {n(rng), n(rng)};
    for (auto& z : d) z = {n(rng), n(rng)};
    const double ns = std::sqrt(norm_squared(s.amplitudes)), nd = std::sqrt(norm_squared(d));
    for (auto& z : s.amplitudes) z /= ns;
    for (auto& z : d) z /= nd;
    const auto jd = jacobian_action(s, d, p);
    const auto fd = oracle::directional_derivative(
        [&](const std::vector<cplx>& a) { return derivative(LatticeState{a, s.time, f}, p); },
        s.amplitudes, d, 1e-6);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < L; ++j) {
      num += std::norm(jd[j] - fd[j]);
      den += std::norm(fd[j]);
    }
    worst = std::max(worst, std::sqrt(num / den));
  }
  report("9", "Jacobian vs central differences, 20 states", worst <= 1e-6,
         fmt("max relative error %.3e (<= 1e-6)", worst));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  std::string workdir = "acceptance_runs";
  double lyapunov_horizon = 200.0;
  double subdiffusion_horizon = 2000.0;
  app.add_option("--only", only, "run only these criteria (1-10)");
  app.add_option("--workdir", workdir, "directory for run outputs");
  app.add_option("--lyapunov-horizon", lyapunov_horizon, "F=0.25 Lyapunov horizon in T_B")
      ->check(CLI::Range(20.0, 1e6));
  app.add_option("--subdiffusion-horizon", subdiffusion_horizon, "criterion 6 horizon in T_B")
      ->check(CLI::Range(2000.0, 1e6));
  CLI11_PARSE(app, argc, argv);
  g_workdir = workdir;
  fs::create_directories(g_workdir);

  auto selected = [&](int c) { return only.empty() || std::find(only.begin(), only.end(), c) != only.end(); };
  const std::map<int, std::function<void()>> criteria{
      {1, criterion1},
      {2, criterion2},
      {3, criterion3},
      {4, criterion4},
      {5, [&] { criterion5(lyapunov_horizon); }},
      {6, [&] { criterion6(subdiffusion_horizon); }},
      {7, criterion7},
      {8, criterion8},
      {9, criterion9},
  };
  for (const auto& [id, fn] : criteria) {
    if (!selected(id)) continue;
    try {
      fn();
    } catch (const std::exception& e) {
      report(std::to_string(id), "criterion aborted", false, e.what());
    }
  }
  if (selected(10))
    std::printf("[N/A ] 10   pixel-level figure match and exact C(t) magnitudes: excluded, covered by criteria 1-9\n");

  int failed = 0;
  for (const auto& c : g_checks) failed += !c.pass;
  std::printf("%zu checks, %d failed\n", g_checks.size(), failed);
  return failed == 0 ? 0 : 1;
}
