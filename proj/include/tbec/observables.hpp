#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tbec/lattice.hpp"
#include "tbec/propagator.hpp"

namespace tbec {

/// b_k = L^{-1/2} sum_l exp(-i kappa l) a_l with the physical site index l and
/// kappa = 2 pi k / L, returned in ascending kappa order over [-pi, pi)
/// (slot q holds k = q - L/2). The amplitudes are taken as given.
Amplitudes bloch_transform(std::span<const cplx> a);
/// Inverse of bloch_transform.
Amplitudes inverse_bloch_transform(std::span<const cplx> b);

/// Bloch-wave amplitudes of a state; static-frame states are mapped to the
/// gauge frame first.
Amplitudes bloch_spectrum(const LatticeState& state, const ModelParams& params);
std::vector<double> spectrum_weights(std::span<const cplx> b);

/// kappa of slot q.
double quasimomentum(int q, int L);

/// Populations are indexed by storage slot j; the physical site is j - L/2.
double mean_position(std::span<const double> P);
double dispersion(std::span<const double> P);
/// Total variation over the ring, including the closing pair.
double fluctuation(std::span<const double> P);
/// Population in the `band` outermost sites at each end of the window.
double edge_population(std::span<const double> P, int band);

/// Hamiltonian of the static-frame equation (the closing bond carries the
/// same twist phase as the equation of motion).
double energy(const LatticeState& state, const ModelParams& params);

struct ObservableSelection {
  bool populations = true;
  bool spectrum = true;
};

/// Time-stamped diagnostics. Per-record vectors are empty when deselected.
struct ObservableSeries {
  int L = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> populations;
  std::vector<std::vector<double>> spectra;
  std::vector<double> dispersion;
  std::vector<double> fluctuation;
  std::vector<double> energy;
  std::vector<double> norm;
  std::vector<double> log_tangent;  // ln|delta a(t)|, only with a tangent

  [[nodiscard]] std::size_t size() const { return times.size(); }
  [[nodiscard]] bool empty() const { return times.empty(); }

  /// Appends one record; times must be strictly increasing.
  void record(const LatticeState& state, const ModelParams& params,
              const TangentState* tangent = nullptr, ObservableSelection select = {});
};

/// Row-major matrix with a time axis.
struct TimeGrid {
  std::vector<double> times;
  std::size_t cols = 0;
  std::vector<double> values;

  [[nodiscard]] std::size_t rows() const { return times.size(); }
  [[nodiscard]] double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  [[nodiscard]] std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }
};

/// |b_k|^2 over (t, k) with times divided by `time_unit` (e.g. T_rev or T_B).
/// Throws on a nonuniform time grid.
TimeGrid carpet_grid(const ObservableSeries& series, double time_unit = 1.0);
TimeGrid population_grid(const ObservableSeries& series, double time_unit = 1.0);

/// Mean population profile over records with t >= t_last - window.
std::vector<double> trailing_average(const ObservableSeries& series, double window);

/// Rotates an ascending-kappa distribution by half the Brillouin zone.
std::vector<double> half_zone_shift(std::span<const double> weights);

}  // namespace tbec
