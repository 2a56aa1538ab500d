#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tbec {

using cplx = std::complex<double>;
using Amplitudes = std::vector<cplx>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FrameMismatch : public Error {
 public:
  using Error::Error;
};

/// Physical constants of the tilted lattice in units hbar = 1, lattice period = 1.
///
/// Sites are stored contiguously as j = 0..L-1; the physical site index is
/// l = j - L/2, so the window is [-L/2, L/2 - 1] with l = 0 at j = L/2.
/// The lattice is a ring (periodic neighbours).
struct ModelParams {
  double J = 1.0;
  double g = 0.0;
  double F = 0.0;
  int L = 64;

  void validate() const;

  [[nodiscard]] int origin() const { return L / 2; }
  [[nodiscard]] int site(int j) const { return j - L / 2; }
  [[nodiscard]] int index(int l) const;
  [[nodiscard]] int min_site() const { return -L / 2; }
  [[nodiscard]] int max_site() const { return L / 2 - 1; }

  /// T_B = 2 pi / F; infinite for F = 0.
  [[nodiscard]] double bloch_period() const;
};

enum class Frame { Static, Gauge };

std::string to_string(Frame f);
Frame frame_from_string(const std::string& s);

struct LatticeState {
  Amplitudes amplitudes;
  double time = 0.0;
  Frame frame = Frame::Static;

  [[nodiscard]] int size() const { return static_cast<int>(amplitudes.size()); }
};

/// Inverted-parabola profile a_l = sqrt(beta - alpha l^2) on its support.
struct ThomasFermiSpec {
  double alpha = 0.0;
  double beta = 0.0;   // fixed by normalization
  int half_width = 0;  // support is |l| <= half_width

  [[nodiscard]] double amplitude(int l) const;
};

/// Solves sum_{alpha l^2 < beta} (beta - alpha l^2) = 1 for beta.
ThomasFermiSpec thomas_fermi_spec(double alpha);

LatticeState thomas_fermi_init(double alpha, const ModelParams& params);
LatticeState uniform_init(const ModelParams& params);
/// Real Gaussian amplitudes with population variance `variance` (sites^2), centred at l = 0.
LatticeState gaussian_init(double variance, const ModelParams& params);
LatticeState single_site_init(int site, const ModelParams& params);

/// Exact phase map between frames: a_static = exp(-i F l t) a_gauge.
LatticeState to_frame(const LatticeState& state, Frame target, const ModelParams& params);

double norm_squared(std::span<const cplx> a);
std::vector<double> populations(std::span<const cplx> a);

}  // namespace tbec
