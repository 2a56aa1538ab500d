#include "tbec/lattice.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace tbec {

void ModelParams::validate() const {
  if (L < 4 || L % 2 != 0)
    throw Error("lattice size L must be even and >= 4, got " + std::to_string(L));
  if (!(J > 0.0)) throw Error("hopping J must be positive");
  if (!(g >= 0.0)) throw Error("interaction g must be nonnegative");
  if (!(F >= 0.0)) throw Error("force F must be nonnegative");
}

int ModelParams::index(int l) const {
  if (l < min_site() || l > max_site())
    throw Error("site " + std::to_string(l) + " outside lattice window");
  return l + L / 2;
}

double ModelParams::bloch_period() const {
  if (F == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * std::numbers::pi / F;
}

std::string to_string(Frame f) { return f == Frame::Static ? "static" : "gauge"; }

Frame frame_from_string(const std::string& s) {
  if (s == "static") return Frame::Static;
  if (s == "gauge") return Frame::Gauge;
  throw Error("unknown frame '" + s + "' (expected static or gauge)");
}

double ThomasFermiSpec::amplitude(int l) const {
  const double d = beta - alpha * static_cast<double>(l) * l;
  return d > 0.0 ? std::sqrt(d) : 0.0;
}

namespace {

// beta for the support |l| <= m: (2m+1) beta - alpha * sum l^2 = 1.
double beta_for_support(double alpha, long m) {
  const double sum_sq = static_cast<double>(m) * (m + 1) * (2 * m + 1) / 3.0;
  return (1.0 + alpha * sum_sq) / static_cast<double>(2 * m + 1);
}

// Largest m with alpha m^2 < beta.
long support_for_beta(double alpha, double beta) {
  auto m = static_cast<long>(std::floor(std::sqrt(beta / alpha)));
  while (m > 0 && alpha * static_cast<double>(m) * m >= beta) --m;
  while (alpha * static_cast<double>(m + 1) * (m + 1) < beta) ++m;
  return m;
}

}  // namespace

ThomasFermiSpec thomas_fermi_spec(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error("Thomas-Fermi alpha must be positive");
  // beta = 1 bounds the true value from above; the support sequence is then
  // nonincreasing and stops at the consistent support.
  double beta = 1.0;
  long m = support_for_beta(alpha, beta);
  for (;;) {
    beta = beta_for_support(alpha, m);
    const long next = support_for_beta(alpha, beta);
    if (next == m) break;
    m = next;
  }
  ThomasFermiSpec tf;
  tf.alpha = alpha;
  tf.beta = beta;
  tf.half_width = static_cast<int>(m);
  return tf;
}

LatticeState thomas_fermi_init(double alpha, const ModelParams& params) {
  params.validate();
  const ThomasFermiSpec tf = thomas_fermi_spec(alpha);
  // Both edge sites must stay empty.
  const int min_L = 2 * tf.half_width + 4;
  if (params.L < min_L)
    throw Error("Thomas-Fermi support |l| <= " + std::to_string(tf.half_width) +
                " touches the lattice boundary; need L >= " + std::to_string(min_L));
  LatticeState s;
  s.amplitudes.assign(params.L, cplx{0.0, 0.0});
  for (int l = -tf.half_width; l <= tf.half_width; ++l)
    s.amplitudes[params.index(l)] = tf.amplitude(l);
  return s;
}

LatticeState uniform_init(const ModelParams& params) {
  params.validate();
  LatticeState s;
  s.amplitudes.assign(params.L, cplx{1.0 / std::sqrt(static_cast<double>(params.L)), 0.0});
  return s;
}

LatticeState gaussian_init(double variance, const ModelParams& params) {
  params.validate();
  if (!(variance > 0.0)) throw Error("Gaussian variance must be positive");
  LatticeState s;
  s.amplitudes.assign(params.L, cplx{});
  double total = 0.0;
  for (int j = 0; j < params.L; ++j) {
    const double l = params.site(j);
    const double p = std::exp(-l * l / (2.0 * variance));
    s.amplitudes[j] = std::sqrt(p);
    total += p;
  }
  const double scale = 1.0 / std::sqrt(total);
  for (auto& a : s.amplitudes) a *= scale;
  return s;
}

LatticeState single_site_init(int site, const ModelParams& params) {
  params.validate();
  LatticeState s;
  s.amplitudes.assign(params.L, cplx{});
  s.amplitudes[params.index(site)] = 1.0;
  return s;
}

LatticeState to_frame(const LatticeState& state, Frame target, const ModelParams& params) {
  if (state.frame == target) return state;
  if (state.size() != params.L) throw Error("state size does not match L");
  LatticeState out = state;
  out.frame = target;
  const double sign = (target == Frame::Gauge) ? 1.0 : -1.0;
  const double ft = params.F * state.time;
  if (ft == 0.0) return out;
  for (int j = 0; j < params.L; ++j)
    out.amplitudes[j] *= std::polar(1.0, sign * ft * params.site(j));
  return out;
}

double norm_squared(std::span<const cplx> a) {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return s;
}

std::vector<double> populations(std::span<const cplx> a) {
  std::vector<double> p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = std::norm(a[i]);
  return p;
}

}  // namespace tbec
