#include "tbec/scenario.hpp"

#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tbec/propagator.hpp"

namespace tbec {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(TimeUnit u) {
  switch (u) {
    case TimeUnit::Natural: return "t";
    case TimeUnit::TwoPi: return "2pi";
    case TimeUnit::Bloch: return "T_B";
    case TimeUnit::Revival: return "T_rev";
  }
  return "t";
}

namespace {

TimeUnit unit_from_string(const std::string& s) {
  if (s == "t") return TimeUnit::Natural;
  if (s == "2pi") return TimeUnit::TwoPi;
  if (s == "T_B") return TimeUnit::Bloch;
  if (s == "T_rev") return TimeUnit::Revival;
  throw Error("unknown time unit '" + s + "' (expected t, 2pi, T_B or T_rev)");
}

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::ThomasFermi: return "thomas_fermi";
    case InitialKind::Uniform: return "uniform";
    case InitialKind::Gaussian: return "gaussian";
    case InitialKind::SingleSite: return "single_site";
  }
  return "thomas_fermi";
}

InitialKind initial_from_string(const std::string& s) {
  if (s == "thomas_fermi") return InitialKind::ThomasFermi;
  if (s == "uniform") return InitialKind::Uniform;
  if (s == "gaussian") return InitialKind::Gaussian;
  if (s == "single_site") return InitialKind::SingleSite;
  throw Error("unknown initial condition '" + s + "'");
}

double parse_number(std::string text, const std::string& key) {
  std::erase_if(text, [](char ch) { return ch == ' ' || ch == '\t'; });
  try {
    return boost::lexical_cast<double>(text);
  } catch (const boost::bad_lexical_cast&) {
    throw Error("config key '" + key + "' has invalid entry '" + text + "'");
  }
}

template <class T>
T read_key(const boost::property_tree::ptree& tree, const std::string& key, T fallback) {
  const auto text = tree.get_optional<std::string>(key);
  if (!text) return fallback;
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (*text == "true" || *text == "yes" || *text == "on" || *text == "1") return true;
      if (*text == "false" || *text == "no" || *text == "off" || *text == "0") return false;
      throw boost::bad_lexical_cast();
    } else {
      return boost::lexical_cast<T>(*text);
    }
  } catch (const boost::bad_lexical_cast&) {
    throw Error("config key '" + key + "' has invalid value '" + *text + "'");
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  params.validate();
  integrator.validate();
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw Error("horizon must be nonnegative");
  if (!(samples_per_unit > 0.0)) throw Error("samples_per_unit must be positive");
  if (!(guard_threshold > 0.0 && guard_threshold < 1.0))
    throw Error("boundary guard threshold must lie in (0, 1)");
  if (guard_band < 1) throw Error("guard band must hold at least one site");
  if (unit == TimeUnit::Bloch && params.F == 0.0) throw Error("T_B time unit needs F > 0");
  if (unit == TimeUnit::Revival &&
      (initial.kind != InitialKind::ThomasFermi || !(params.g > 0.0)))
    throw Error("T_rev time unit needs a Thomas-Fermi initial state and g > 0");
  if (kind == ScenarioKind::Diffusion && !(diffusion_coefficient > 0.0))
    throw Error("diffusion coefficient must be positive");
}

double ScenarioConfig::bloch_period() const { return params.bloch_period(); }

double ScenarioConfig::revival_period() const { return revival_time(params.g, initial.alpha); }

double ScenarioConfig::time_unit_value() const {
  switch (unit) {
    case TimeUnit::Natural: return 1.0;
    case TimeUnit::TwoPi: return 2.0 * std::numbers::pi;
    case TimeUnit::Bloch: return bloch_period();
    case TimeUnit::Revival: return revival_period();
  }
  return 1.0;
}

std::vector<double> ScenarioConfig::sample_times() const {
  const double u = time_unit_value();
  const auto n = static_cast<long>(std::llround(horizon * samples_per_unit));
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) t[i] = u * static_cast<double>(i) / samples_per_unit;
  return t;
}

std::vector<std::string> builtin_scenario_names() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5"};
}

ScenarioConfig builtin_scenario(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  c.output_dir = fs::path("runs") / name;
  c.params = {1.0, 10.0, 100.0, 64};
  c.initial = {InitialKind::ThomasFermi, 0.001, 16.0, 0};
  c.frame = Frame::Gauge;
  if (name == "fig1" || name == "fig2") {
    c.params.F = name == "fig1" ? 100.0 : 10.0;
    c.integrator.dt = std::min(c.params.bloch_period(), 1.0) / 400.0;
    c.unit = TimeUnit::Revival;
    c.horizon = 1.0;
    c.samples_per_unit = 512.0;
    return c;
  }
  if (name == "fig3" || name == "fig4") {
    c.params.F = 0.25;
    c.params.L = 512;
    c.unit = TimeUnit::Bloch;
    c.horizon = 4000.0;
    c.samples_per_unit = 1.0;
    c.observe.spectrum = false;
    if (name == "fig4") c.average_window = 25.0;
    return c;
  }
  if (name == "fig5") {
    c.kind = ScenarioKind::Diffusion;
    c.params.L = 512;
    c.params.F = 0.0;
    c.unit = TimeUnit::TwoPi;
    c.horizon = 1000.0;
    c.samples_per_unit = 1.0;
    c.diffusion_model = DiffusionModel::Nonlinear;
    c.diffusion_coefficient = 50.0;
    c.snapshots = {0.0, 100.0, 1000.0};
    return c;
  }
  throw Error("unknown scenario '" + name + "' (built-ins: fig1 fig2 fig3 fig4 fig5)");
}

ScenarioConfig load_scenario_config(const fs::path& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw IoError("cannot parse config " + path.string() + ": " + e.message());
  }
  ScenarioConfig c;
  if (auto base = tree.get_optional<std::string>("scenario.base")) c = builtin_scenario(*base);
  c.name = tree.get<std::string>("scenario.name", c.name == "custom" ? path.stem().string() : c.name);
  if (auto k = tree.get_optional<std::string>("scenario.kind")) {
    if (*k == "dnlse") c.kind = ScenarioKind::Dnlse;
    else if (*k == "diffusion") c.kind = ScenarioKind::Diffusion;
    else throw Error("unknown scenario kind '" + *k + "'");
  }
  c.params.J = read_key(tree, "model.J", c.params.J);
  c.params.g = read_key(tree, "model.g", c.params.g);
  c.params.F = read_key(tree, "model.F", c.params.F);
  c.params.L = read_key(tree, "model.L", c.params.L);
  if (auto s = tree.get_optional<std::string>("initial.type")) c.initial.kind = initial_from_string(*s);
  c.initial.alpha = read_key(tree, "initial.alpha", c.initial.alpha);
  c.initial.variance = read_key(tree, "initial.variance", c.initial.variance);
  c.initial.site = read_key(tree, "initial.site", c.initial.site);
  if (auto s = tree.get_optional<std::string>("integrator.frame")) c.frame = frame_from_string(*s);
  if (auto s = tree.get_optional<std::string>("integrator.scheme"))
    c.integrator.scheme = scheme_from_string(*s);
  c.integrator.dt = read_key(tree, "integrator.dt", c.integrator.dt);
  c.integrator.tolerance = read_key(tree, "integrator.tolerance", c.integrator.tolerance);
  c.integrator.renorm_interval = read_key(tree, "integrator.renorm_interval", c.integrator.renorm_interval);
  if (auto s = tree.get_optional<std::string>("output.unit")) c.unit = unit_from_string(*s);
  c.horizon = read_key(tree, "output.horizon", c.horizon);
  c.samples_per_unit = read_key(tree, "output.samples_per_unit", c.samples_per_unit);
  c.observe.populations = read_key(tree, "output.populations", c.observe.populations);
  c.observe.spectrum = read_key(tree, "output.spectra", c.observe.spectrum);
  c.lyapunov = read_key(tree, "output.lyapunov", c.lyapunov);
  c.average_window = read_key(tree, "output.average_window", c.average_window);
  if (auto s = tree.get_optional<std::string>("output.format"))
    c.format = (*s == "csv") ? TableFormat::Csv : TableFormat::Tsv;
  c.output_dir = read_key(tree, "output.dir", (fs::path("runs") / c.name).string());
  c.guard_threshold = read_key(tree, "guard.threshold", c.guard_threshold);
  c.guard_band = read_key(tree, "guard.band", c.guard_band);
  c.max_norm_drift = read_key(tree, "guard.max_norm_drift", c.max_norm_drift);
  if (auto s = tree.get_optional<std::string>("diffusion.model"))
    c.diffusion_model = (*s == "linear") ? DiffusionModel::Linear : DiffusionModel::Nonlinear;
  c.diffusion_coefficient = read_key(tree, "diffusion.coefficient", c.diffusion_coefficient);
  if (auto s = tree.get_optional<std::string>("diffusion.snapshots")) {
    c.snapshots.clear();
    std::stringstream ss(*s);
    std::string item;
    while (std::getline(ss, item, ',')) c.snapshots.push_back(parse_number(item, "diffusion.snapshots"));
  }
  c.seed = read_key(tree, "run.seed", c.seed);
  c.validate();
  return c;
}

void apply_overrides(ScenarioConfig& c, const Overrides& o) {
  if (o.seed) c.seed = *o.seed;
  if (o.output_dir) c.output_dir = *o.output_dir;
  if (o.L) c.params.L = *o.L;
  if (o.tolerance) {
    c.integrator.tolerance = *o.tolerance;
    c.integrator.scheme = Scheme::AdaptiveEmbedded;
  }
  if (o.horizon) c.horizon = *o.horizon;
  c.validate();
}

LatticeState initial_state(const ScenarioConfig& c) {
  switch (c.initial.kind) {
    case InitialKind::ThomasFermi: return thomas_fermi_init(c.initial.alpha, c.params);
    case InitialKind::Uniform: return uniform_init(c.params);
    case InitialKind::Gaussian: return gaussian_init(c.initial.variance, c.params);
    case InitialKind::SingleSite: return single_site_init(c.initial.site, c.params);
  }
  throw Error("unknown initial condition");
}

namespace {

json params_json(const ScenarioConfig& c) {
  json j;
  j["J"] = c.params.J;
  j["g"] = c.params.g;
  j["F"] = c.params.F;
  j["L"] = c.params.L;
  j["initial"] = {{"type", to_string(c.initial.kind)}};
  if (c.initial.kind == InitialKind::ThomasFermi) {
    const auto tf = thomas_fermi_spec(c.initial.alpha);
    j["initial"]["alpha"] = tf.alpha;
    j["initial"]["beta"] = tf.beta;
    j["initial"]["half_width"] = tf.half_width;
  } else if (c.initial.kind == InitialKind::Gaussian) {
    j["initial"]["variance"] = c.initial.variance;
  } else if (c.initial.kind == InitialKind::SingleSite) {
    j["initial"]["site"] = c.initial.site;
  }
  return j;
}

// Smallest even L whose guard bands stay empty for the populated extent.
int suggest_L(std::span<const double> P, double threshold, int band) {
  const int L = static_cast<int>(P.size());
  int extent = 0;
  for (int j = 0; j < L; ++j)
    if (P[j] > threshold) extent = std::max(extent, std::abs(j - L / 2) + (j < L / 2 ? 0 : 1));
  int s = 2 * (extent + band + 1);
  return std::max(s + (s % 2), L + 2);
}

std::optional<std::size_t> find_time(const std::vector<double>& times, double t) {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
  return std::nullopt;
}

Metadata base_metadata(const ScenarioConfig& c) {
  Metadata m;
  m.emplace_back("scenario", c.name);
  m.emplace_back("J", format_double(c.params.J));
  m.emplace_back("g", format_double(c.params.g));
  m.emplace_back("F", format_double(c.params.F));
  m.emplace_back("L", std::to_string(c.params.L));
  m.emplace_back("initial", to_string(c.initial.kind));
  if (c.initial.kind == InitialKind::ThomasFermi) m.emplace_back("alpha", format_double(c.initial.alpha));
  m.emplace_back("frame", to_string(c.frame));
  m.emplace_back("seed", std::to_string(c.seed));
  return m;
}

json fit_json(const FitResult& f) {
  return {{"exponent", f.exponent},
          {"prefactor", f.prefactor},
          {"window", {f.fit_window.first, f.fit_window.second}},
          {"residual", f.residual},
          {"points", f.points}};
}

void write_report(const fs::path& dir, const json& report) {
  std::ofstream out(dir / "report.json");
  if (!out) throw IoError("cannot write " + (dir / "report.json").string());
  out << report.dump(2) << '\n';
}

RunResult run_dnlse(const ScenarioConfig& c) {
  const auto wall0 = std::chrono::steady_clock::now();
  RunResult result;
  const ModelParams& p = c.params;
  LatticeState s0 = to_frame(initial_state(c), c.frame, p);
  const auto P0 = populations(s0.amplitudes);
  const auto times = c.sample_times();
  const double t_end = times.back();

  ObservableSeries& series = result.series;
  double max_edge = 0.0;
  auto observe = [&](const LatticeState& s, const TangentState* tangent) {
    series.record(s, p, tangent, c.observe);
    const auto P = populations(s.amplitudes);
    const double edge = edge_population(P, c.guard_band);
    max_edge = std::max(max_edge, edge);
    if (edge > c.guard_threshold) {
      const int L_min = suggest_L(P, c.guard_threshold, c.guard_band);
      throw BoundaryGuardError("boundary guard tripped at t = " + format_double(s.time) +
                                   ": edge-band population " + format_double(edge) + " > " +
                                   format_double(c.guard_threshold) + "; rerun with L >= " +
                                   std::to_string(L_min),
                               L_min);
    }
    const double drift = std::abs(series.norm.back() - 1.0);
    if (drift > c.max_norm_drift)
      throw ConservationError("norm drift " + format_double(drift) + " at t = " +
                              format_double(s.time) + " exceeds " +
                              format_double(c.max_norm_drift));
  };
  Observation obs{times, observe};
  const double dt =
      c.integrator.dt > 0.0 ? c.integrator.dt : default_time_step(p, c.frame);
  if (c.lyapunov) {
    propagate_with_tangent(s0, random_tangent(p.L, c.seed), p, c.integrator, t_end, obs);
  } else {
    propagate(s0, p, c.integrator, t_end, obs);
  }

  json report;
  report["scenario"] = c.name;
  report["kind"] = "dnlse";
  report["code_version"] = kCodeVersion;
  report["parameters"] = params_json(c);
  report["frame"] = to_string(c.frame);
  report["integrator"] = {{"scheme", to_string(c.integrator.scheme)},
                          {"dt", dt},
                          {"tolerance", c.integrator.tolerance},
                          {"renorm_interval", c.integrator.renorm_interval}};
  report["seed"] = c.seed;
  report["time_units"] = {{"unit", to_string(c.unit)},
                          {"T_B", std::isfinite(c.bloch_period()) ? json(c.bloch_period()) : json(nullptr)}};
  if (c.initial.kind == InitialKind::ThomasFermi && p.g > 0.0)
    report["time_units"]["T_rev"] = c.revival_period();
  report["horizon"] = {{"value", c.horizon}, {"time", t_end}};
  report["samples"] = series.size();

  double max_norm = 0.0, max_energy = 0.0;
  const double H0 = series.energy.front();
  for (std::size_t i = 0; i < series.size(); ++i) {
    max_norm = std::max(max_norm, std::abs(series.norm[i] - 1.0));
    max_energy = std::max(max_energy, std::abs(series.energy[i] - H0));
  }
  const double H_scale = std::abs(H0) > 0.0 ? std::abs(H0) : 1.0;
  report["conservation"] = {{"initial_energy", H0},
                            {"max_norm_drift", max_norm},
                            {"norm_drift_per_time", t_end > 0.0 ? max_norm / t_end : 0.0},
                            {"max_energy_rel_drift", max_energy / H_scale}};
  report["guard"] = {{"threshold", c.guard_threshold},
                     {"band", c.guard_band},
                     {"max_edge_population", max_edge}};

  json res = json::object();
  double max_dev = 0.0;
  for (std::size_t r = 0; r < series.size(); ++r) {
    if (series.populations[r].empty()) break;
    for (int j = 0; j < p.L; ++j)
      max_dev = std::max(max_dev, std::abs(series.populations[r][j] - P0[j]));
  }
  const double P0_max = *std::max_element(P0.begin(), P0.end());
  if (c.observe.populations) res["max_population_deviation_rel"] = max_dev / P0_max;

  if (c.initial.kind == InitialKind::ThomasFermi && p.g > 0.0 && c.observe.spectrum) {
    const CarpetReference ref{thomas_fermi_spec(c.initial.alpha), p.g, p.L,
                              revival_structure(p.g, c.initial.alpha)};
    const double T_rev = ref.revival.T_rev;
    const auto& w0 = series.spectra.front();
    if (auto i = find_time(series.times, T_rev))
      res["revival_fidelity"] = bhattacharyya(series.spectra[*i], w0);
    if (auto i = find_time(series.times, 0.5 * T_rev))
      res["half_revival_fidelity"] = bhattacharyya(series.spectra[*i], half_zone_shift(w0));
    if (series.size() > 1) {
      const auto coh = coherence_time(series, ref);
      res["coherence_time"] = {{"time", coh.time},
                               {"in_T_rev", coh.time / T_rev},
                               {"censored", coh.censored},
                               {"metric", "pearson"},
                               {"threshold", CoherenceOptions{}.threshold},
                               {"dwell_T_rev", CoherenceOptions{}.dwell}};
    }
  }

  if (c.lyapunov && series.size() > 2) {
    std::vector<double> t(series.times.begin() + 1, series.times.end());
    std::vector<double> lm(series.log_tangent.begin() + 1, series.log_tangent.end());
    const auto lam = lyapunov_series(t, lm);
    const auto st = plateau(t, lam, 0.5 * t_end, t_end);
    res["lyapunov"] = {{"final", lam.back()},
                       {"plateau_mean", st.mean},
                       {"plateau_std", st.stddev},
                       {"final_log_tangent", lm.back()}};
  }

  if (c.unit == TimeUnit::Bloch && series.size() > 1) {
    std::vector<double> t(series.times.begin() + 1, series.times.end());
    std::vector<double> M(series.dispersion.begin() + 1, series.dispersion.end());
    try {
      const auto window = default_fit_window(t, M);
      res["dispersion_fit"] = fit_json(fit_power_law(t, M, window));
      res["sqrt_t_prefactor"] = fit_prefactor(t, M, window, 0.5).prefactor;
    } catch (const Error& e) {
      res["dispersion_fit"] = {{"error", e.what()}};
    }
  }

  std::error_code ec;
  fs::create_directories(c.output_dir, ec);
  if (ec) throw IoError("cannot create " + c.output_dir.string() + ": " + ec.message());
  auto meta = base_metadata(c);
  auto files = export_series(series, c.format, c.output_dir, c.name, meta, c.time_unit_value(),
                             to_string(c.unit));
  result.files = files.files;

  if (c.average_window > 0.0 && c.observe.populations) {
    const double window = c.average_window * c.bloch_period();
    const auto avg = trailing_average(series, window);
    Table t;
    t.columns = {"l", "P_average", "P_initial"};
    for (int j = 0; j < p.L; ++j) t.rows.push_back({static_cast<double>(p.site(j)), avg[j], P0[j]});
    auto m = meta;
    m.emplace_back("layout", "site l, trailing-window average P_l, initial P_l");
    m.emplace_back("average_window_T_B", format_double(c.average_window));
    const auto path =
        c.output_dir / (c.name + "_profile" + (c.format == TableFormat::Tsv ? ".tsv" : ".csv"));
    write_table(path, t, c.format, m);
    result.files.push_back(path);
    res["averaged_profile"] = {{"window_T_B", c.average_window},
                               {"dispersion", dispersion(avg)}};
  }

  report["results"] = res;
  json file_list = json::array();
  for (const auto& f : result.files) file_list.push_back(f.filename().string());
  report["files"] = file_list;
  report["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  write_report(c.output_dir, report);
  result.report = std::move(report);
  return result;
}

RunResult run_diffusion(const ScenarioConfig& c) {
  const auto wall0 = std::chrono::steady_clock::now();
  RunResult result;
  const auto s0 = initial_state(c);
  DiffusionProfile profile = profile_from_state(s0);
  const double u = c.time_unit_value();
  DiffusionRunOptions opt;
  opt.model = c.diffusion_model;
  opt.coefficient = c.diffusion_coefficient;
  opt.sample_times = c.sample_times();
  for (double s : c.snapshots) opt.snapshot_times.push_back(s * u);
  DiffusionRun run = evolve_diffusion(profile, opt);

  const double edge = edge_population(run.final.P, c.guard_band);
  if (edge > c.guard_threshold) {
    const int L_min = suggest_L(run.final.P, c.guard_threshold, c.guard_band);
    throw BoundaryGuardError("diffusion profile reached the lattice edge; rerun with L >= " +
                                 std::to_string(L_min),
                             L_min);
  }

  std::error_code ec;
  fs::create_directories(c.output_dir, ec);
  if (ec) throw IoError("cannot create " + c.output_dir.string() + ": " + ec.message());
  const std::string ext = c.format == TableFormat::Tsv ? ".tsv" : ".csv";
  auto meta = base_metadata(c);
  meta.emplace_back("model", c.diffusion_model == DiffusionModel::Linear ? "linear" : "nonlinear");
  meta.emplace_back("coefficient", format_double(c.diffusion_coefficient));
  meta.emplace_back("time_unit", to_string(c.unit));

  Table profiles;
  profiles.columns.push_back("time");
  for (int j = 0; j < c.params.L; ++j) profiles.columns.push_back("l=" + std::to_string(c.params.site(j)));
  for (const auto& snap : run.snapshots) {
    std::vector<double> row{snap.time / u};
    row.insert(row.end(), snap.P.begin(), snap.P.end());
    profiles.rows.push_back(std::move(row));
  }
  auto m1 = meta;
  m1.emplace_back("layout", "time, then P_l for l = -L/2 .. L/2-1 (linear scale; take log10 for the log view)");
  const auto p1 = c.output_dir / (c.name + "_profiles" + ext);
  write_table(p1, profiles, c.format, m1);

  Table moments;
  moments.columns = {"time", "M", "radius", "mass"};
  for (std::size_t i = 0; i < run.times.size(); ++i)
    moments.rows.push_back({run.times[i] / u, run.dispersion[i], run.radius[i], run.mass[i]});
  auto m2 = meta;
  m2.emplace_back("layout", "time, dispersion M, support radius, total mass");
  const auto p2 = c.output_dir / (c.name + "_moments" + ext);
  write_table(p2, moments, c.format, m2);
  result.files = {p1, p2};

  json report;
  report["scenario"] = c.name;
  report["kind"] = "diffusion";
  report["code_version"] = kCodeVersion;
  report["parameters"] = params_json(c);
  report["diffusion"] = {{"model", c.diffusion_model == DiffusionModel::Linear ? "linear" : "nonlinear"},
                         {"coefficient", c.diffusion_coefficient},
                         {"safety", opt.safety},
                         {"support_threshold", opt.support_threshold},
                         {"steps", run.steps}};
  report["time_units"] = {{"unit", to_string(c.unit)}};
  report["horizon"] = {{"value", c.horizon}, {"time", c.horizon * u}};
  report["seed"] = c.seed;
  double mass_drift = 0.0;
  for (double mval : run.mass) mass_drift = std::max(mass_drift, std::abs(mval - run.mass.front()));
  report["conservation"] = {{"max_mass_drift", mass_drift}};
  json res;
  try {
    const auto sc = scaling_check(run);
    res["dispersion_fit"] = fit_json(sc.dispersion);
    res["radius_fit"] = fit_json(sc.radius);
  } catch (const Error& e) {
    res["scaling_check"] = {{"error", e.what()}};
  }
  report["results"] = res;
  report["files"] = json::array({p1.filename().string(), p2.filename().string()});
  report["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  write_report(c.output_dir, report);
  result.diffusion = std::move(run);
  result.report = std::move(report);
  return result;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  return config.kind == ScenarioKind::Dnlse ? run_dnlse(config) : run_diffusion(config);
}

json run_sweep(const fs::path& config_file, const Overrides& overrides) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(config_file.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw IoError("cannot parse sweep config " + config_file.string() + ": " + e.message());
  }
  const auto param = tree.get_optional<std::string>("sweep.parameter");
  const auto values_text = tree.get_optional<std::string>("sweep.values");
  if (!param || !values_text) throw Error("sweep config needs [sweep] parameter and values");
  std::vector<std::string> values;
  {
    std::stringstream ss(*values_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto b = item.find_first_not_of(" \t");
      const auto e = item.find_last_not_of(" \t");
      if (b != std::string::npos) values.push_back(item.substr(b, e - b + 1));
    }
  }
  ScenarioConfig base = load_scenario_config(config_file);
  apply_overrides(base, overrides);

  std::vector<ScenarioConfig> variants;
  for (const auto& v : values) {
    ScenarioConfig c = base;
    const double x = parse_number(v, "sweep.values");
    if (*param == "F") c.params.F = x;
    else if (*param == "g") c.params.g = x;
    else if (*param == "J") c.params.J = x;
    else if (*param == "L") c.params.L = static_cast<int>(x);
    else if (*param == "alpha") c.initial.alpha = x;
    else if (*param == "seed") c.seed = static_cast<std::uint64_t>(x);
    else if (*param == "coefficient") c.diffusion_coefficient = x;
    else throw Error("unsupported sweep parameter '" + *param + "'");
    c.name = base.name + "_" + *param + "=" + v;
    c.output_dir = base.output_dir / c.name;
    c.validate();
    variants.push_back(std::move(c));
  }

  std::vector<json> entries(variants.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < variants.size(); ++i) {
    json e;
    e["name"] = variants[i].name;
    e["value"] = values[i];
    try {
      const auto r = run_scenario(variants[i]);
      e["status"] = "ok";
      e["results"] = r.report["results"];
      e["conservation"] = r.report["conservation"];
    } catch (const std::exception& ex) {
      e["status"] = "error";
      e["error"] = ex.what();
    }
    entries[i] = std::move(e);
  }
  json summary;
  summary["sweep"] = {{"parameter", *param}, {"values", values}, {"base", base.name}};
  summary["runs"] = entries;
  std::error_code ec;
  fs::create_directories(base.output_dir, ec);
  std::ofstream out(base.output_dir / "sweep.json");
  if (!out) throw IoError("cannot write " + (base.output_dir / "sweep.json").string());
  out << summary.dump(2) << '\n';
  return summary;
}

std::string summarize_report(const fs::path& run_dir) {
  const fs::path path = run_dir / "report.json";
  std::ifstream in(path);
  if (!in) throw IoError("no report.json in " + run_dir.string());
  json r;
  try {
    in >> r;
  } catch (const json::exception& e) {
    throw IoError("malformed " + path.string() + ": " + e.what());
  }
  std::ostringstream os;
  os << "scenario     " << r.value("scenario", "?") << " (" << r.value("kind", "?") << ")\n";
  const auto& p = r["parameters"];
  os << "parameters   J=" << p.value("J", 0.0) << " g=" << p.value("g", 0.0)
     << " F=" << p.value("F", 0.0) << " L=" << p.value("L", 0) << '\n';
  if (r.contains("horizon"))
    os << "horizon      " << r["horizon"].value("value", 0.0) << ' '
       << r["time_units"].value("unit", "t") << " (t = " << r["horizon"].value("time", 0.0) << ")\n";
  if (r.contains("conservation"))
    for (const auto& [k, v] : r["conservation"].items()) os << "  " << k << " = " << v.dump() << '\n';
  if (r.contains("results"))
    for (const auto& [k, v] : r["results"].items()) os << "  " << k << " = " << v.dump() << '\n';
  if (r.contains("wall_time_s")) os << "wall time    " << r["wall_time_s"].get<double>() << " s\n";
  return os.str();
}

}  // namespace tbec
