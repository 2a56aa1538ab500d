#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tbec/lattice.hpp"
#include "tbec/observables.hpp"

namespace tbec {

struct Fraction {
  int m = 0;
  int n = 1;
};

/// Revival time and the rational revival fractions t = (m/n) T_rev, where n
/// reduced copies of the initial distribution are expected.
struct RevivalStructure {
  double T_rev = 0.0;
  std::vector<Fraction> fractions;
};

/// T_rev = 2 pi / (g alpha).
double revival_time(double g, double alpha);
RevivalStructure revival_structure(double g, double alpha, int max_denominator = 4);

/// a_l(t) = a_l(0) exp(-i g |a_l(0)|^2 t), the strong-field limit in the gauge frame.
LatticeState frozen_phase_state(const LatticeState& initial, double g, double t);

/// Bloch amplitudes of the frozen-phase Thomas-Fermi state at time t, with the
/// global phase exp(-i g beta t), normalized to unit weight.
Amplitudes gauss_sum_spectrum(const ThomasFermiSpec& tf, double g, double t, int L);

/// b_0(t) = exp(i (J/F) sin(F t) - i (g/L) t) for the uniform initial state;
/// all other modes vanish.
cplx uniform_closed_form(double J, double F, double g, int L, double t);

/// Bhattacharyya overlap sum_k sqrt(p_k q_k) of the normalized distributions.
double bhattacharyya(std::span<const double> p, std::span<const double> q);

/// Independent Thomas-Fermi quantities the carpet comparison needs.
struct CarpetReference {
  ThomasFermiSpec tf;
  double g = 0.0;
  int L = 0;
  RevivalStructure revival;
};

/// Pearson correlation of two equal-length sequences; 0 when either is constant.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

enum class CoherenceMetric { Pearson, Bhattacharyya };

struct CoherenceOptions {
  CoherenceMetric metric = CoherenceMetric::Pearson;
  double threshold = 0.5;
  double dwell = 0.02;  // in units of T_rev
};

struct CoherenceResult {
  double time = 0.0;      // T_coh, or the horizon when censored
  bool censored = false;  // fidelity never dropped below threshold for the dwell window
  std::vector<double> fidelity;
};

/// Agreement with the Gauss-sum prediction at every record and the
/// first time it falls below the threshold and stays there for the dwell window.
CoherenceResult coherence_time(const ObservableSeries& series, const CarpetReference& reference,
                               const CoherenceOptions& options = {});

/// lambda(t) = ln|delta a(t)| / t.
std::vector<double> lyapunov_series(std::span<const double> times,
                                    std::span<const double> log_magnitude);

struct PlateauStats {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Mean and standard deviation of the values whose time lies in [t_from, t_to].
PlateauStats plateau(std::span<const double> times, std::span<const double> values, double t_from,
                     double t_to);

struct FitResult {
  double exponent = 0.0;
  double prefactor = 0.0;
  std::pair<double, double> fit_window{0.0, 0.0};
  double residual = 0.0;  // RMS of the log-space residuals
  int points = 0;
};

inline constexpr int kMinFitPoints = 8;

/// Least-squares line ln y = ln A + p ln t over the points with t in window.
FitResult fit_power_law(std::span<const double> t, std::span<const double> y,
                        std::pair<double, double> window);

/// Same, with the exponent held fixed; returns the best prefactor.
FitResult fit_prefactor(std::span<const double> t, std::span<const double> y,
                        std::pair<double, double> window, double exponent);

/// Last half-decade [t_end / sqrt(10), t_end], starting no earlier than the
/// first time y leaves the 5% band around y(0).
std::pair<double, double> default_fit_window(std::span<const double> t, std::span<const double> y);

/// Number of local maxima on the ring above rel_threshold * max.
int count_peaks(std::span<const double> weights, double rel_threshold = 0.25);

}  // namespace tbec
