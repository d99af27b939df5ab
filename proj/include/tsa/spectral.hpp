#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tsa {

enum class WindowKind { Rectangular, Hann };

WindowKind window_from_name(std::string_view name);
std::string_view window_name(WindowKind kind);

struct WelchParams {
  std::size_t segments = 4;       // used when segment_length == 0
  std::size_t segment_length = 0; // explicit length wins over segments
  double overlap = 0.5;           // fraction of segment_length, [0, 1)
  WindowKind window = WindowKind::Hann;
};

// One-sided power spectral density estimate. freqs[k] = k fs / L in the same
// units as fs; power integrates to the series variance (Parseval):
// sum_k S_k (fs / L) = mean(y^2) for the raw periodogram.
struct Periodogram {
  std::vector<double> freqs;
  std::vector<double> power;
  double fs = 1.0;
  std::string method;
};

// Raw periodogram: S_k = 2 |Y_k|^2 / (fs N) with the DC and (even N) Nyquist
// bins undoubled.
Periodogram periodogram(std::span<const double> y, double fs);

// Welch average of windowed overlapping segments, each normalized by the
// window power U = mean(w^2). One rectangular segment with zero overlap
// reproduces the raw periodogram exactly.
Periodogram welch(std::span<const double> y, double fs, const WelchParams& params = {});

struct PowerLawPsdFit {
  double p0 = 0.0;     // level at f = fs
  double kappa = 0.0;  // log-log slope
  std::size_t bins_used = 0;
  std::size_t bins_dropped = 0;
};

// Least-squares line through (ln(f/fs), ln S), DC bin excluded, non-positive
// bins dropped. Requires at least 8 usable bins.
PowerLawPsdFit fit_power_law_psd(const Periodogram& pg);

// Two-column text serialization with '# key: value' headers.
void write_periodogram(const Periodogram& pg, std::ostream& out,
                       std::span<const std::pair<std::string, std::string>> headers = {});

}  // namespace tsa
