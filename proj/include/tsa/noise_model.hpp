#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tsa {

inline constexpr double kKappaMin = -2.0;
inline constexpr double kKappaMax = 2.0;

enum class NoiseKind {
  White,
  PowerLaw,
  Flicker,
  RandomWalk,
  Ggm,
  Figgm,
  PowerLawPlusWhite,
};

NoiseKind noise_kind_from_name(std::string_view name);
std::string_view noise_kind_name(NoiseKind kind);

// Parametric description of the stochastic part of a series.
//
// Named kinds are aliases for canonical power-law indices: White = kappa 0,
// Flicker = kappa -1, RandomWalk = kappa -2. Ggm damps the power-law filter
// with phi in (0, 1]; Figgm chains a fractional integration of index kappa2
// in front of a Ggm stage. PowerLawPlusWhite mixes a power-law process and
// white noise with fraction phi_mix on the colored part.
struct NoiseModel {
  NoiseKind kind = NoiseKind::White;
  double kappa = 0.0;     // spectral index of the (first) power-law stage
  double kappa2 = 0.0;    // spectral index of the Figgm integration stage
  double phi = 1.0;       // Ggm damping factor, (0, 1]
  double sigma = 1.0;     // driver amplitude, observation units
  double phi_mix = 1.0;   // colored fraction for PowerLawPlusWhite, [0, 1]

  // Spectral index after resolving named aliases.
  double canonical_kappa() const;

  // False when the model's autocovariance diverges (effective index below -1
  // with no damping).
  bool stationary() const;

  // Amplitude split for PowerLawPlusWhite: sigma_pl = sigma*sqrt(phi_mix),
  // sigma_w = sigma*sqrt(1-phi_mix). For other kinds sigma_pl() == sigma.
  double sigma_pl() const;
  double sigma_w() const;

  // Canonicalize a (sigma_pl, sigma_w) amplitude pair into the
  // (sigma, phi_mix) parameterization.
  static NoiseModel power_law_plus_white(double sigma_pl, double sigma_w, double kappa);

  void validate() const;  // throws DomainError
  std::string describe() const;
};

// Impulse response of the recursive fractional-differencing filter that maps
// a unit-variance white driver to the colored process. h[0] is always 1.
struct FilterCoefficients {
  std::vector<double> h;
  double kappa = 0.0;
  double phi = 1.0;
};

// First n taps of (1-B)^(kappa/2) inverted, computed by the stable recurrence
// h_i = (i - kappa/2 - 1) h_{i-1} / i.
FilterCoefficients powerlaw_filter(double kappa, std::size_t n);

// Generalized Gauss-Markov taps: each power-law tap damped by phi^i.
FilterCoefficients ggm_filter(double kappa, double phi, std::size_t n);

// Fractionally integrated GGM: convolution of powerlaw_filter(kappa2) with
// ggm_filter(kappa1, phi), truncated to n taps.
FilterCoefficients figgm_filter(double kappa1, double kappa2, double phi, std::size_t n);

// Dispatch on model.kind. Not defined for PowerLawPlusWhite (the mixture has
// no single filter); asks for the colored component's taps in that case.
FilterCoefficients filter_coefficients(const NoiseModel& model, std::size_t n);

// One-sided theoretical power spectra, observation units squared per cycle.
// f and fs share units; valid for 0 <= f <= fs/2, with f = 0 rejected when
// the spectrum diverges there.
double psd_powerlaw(double f, double kappa, double sigma, double fs);
double psd_ggm(double f, double kappa, double phi, double sigma, double fs);
double psd(const NoiseModel& model, double f, double fs);

}  // namespace tsa
