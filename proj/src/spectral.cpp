#include "tsa/spectral.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "tsa/errors.hpp"
#include "tsa/fft.hpp"
#include "tsa/series_io.hpp"

namespace tsa {

WindowKind window_from_name(std::string_view name) {
  if (name == "rectangular" || name == "boxcar") return WindowKind::Rectangular;
  if (name == "hann" || name == "hanning") return WindowKind::Hann;
  throw SpecError("unknown window '" + std::string(name) +
                  "' (expected rectangular|hann)");
}

std::string_view window_name(WindowKind kind) {
  return kind == WindowKind::Hann ? "hann" : "rectangular";
}

namespace {

// One-sided PSD of one (windowed) segment: S_k = d_k |Y_k|^2 / (fs L U) with
// the doubling factor d_k = 2 except at DC and, for even L, Nyquist.
// U = mean(w^2) compensates the window power.
std::vector<double> segment_psd(std::span<const double> seg,
                                std::span<const double> window, double fs) {
  const std::size_t len = seg.size();
  std::vector<double> buf(seg.begin(), seg.end());
  double u = 1.0;
  if (!window.empty()) {
    double wsum = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      buf[i] *= window[i];
      wsum += window[i] * window[i];
    }
    u = wsum / static_cast<double>(len);
  }
  const auto spec = rfft(buf);
  const double denom = fs * static_cast<double>(len) * u;
  std::vector<double> psd(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double p = std::norm(spec[k]) / denom;
    const bool edge = k == 0 || (len % 2 == 0 && k == len / 2);
    psd[k] = edge ? p : 2.0 * p;
  }
  return psd;
}

std::vector<double> make_window(WindowKind kind, std::size_t len) {
  std::vector<double> w(len, 1.0);
  if (kind == WindowKind::Hann) {
    for (std::size_t i = 0; i < len; ++i) {
      w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                   static_cast<double>(len)));
    }
  }
  return w;
}

}  // namespace

Periodogram periodogram(std::span<const double> y, double fs) {
  if (y.size() < 2) throw DomainError("periodogram: need at least 2 samples");
  if (!(fs > 0.0)) throw DomainError("periodogram: fs must be positive");

  Periodogram pg;
  pg.fs = fs;
  pg.method = "raw";
  pg.power = segment_psd(y, {}, fs);
  pg.freqs.resize(pg.power.size());
  for (std::size_t k = 0; k < pg.freqs.size(); ++k) {
    pg.freqs[k] = fs * static_cast<double>(k) / static_cast<double>(y.size());
  }
  return pg;
}

Periodogram welch(std::span<const double> y, double fs, const WelchParams& params) {
  const std::size_t n = y.size();
  if (n < 2) throw DomainError("welch: need at least 2 samples");
  if (!(fs > 0.0)) throw DomainError("welch: fs must be positive");
  if (!(params.overlap >= 0.0 && params.overlap < 1.0)) {
    throw DomainError("welch: overlap must lie in [0, 1)");
  }

  std::size_t len = params.segment_length;
  if (len == 0) {
    const std::size_t segs = std::max<std::size_t>(params.segments, 1);
    // n >= len + (segs-1) * len * (1 - overlap)
    const double denom = 1.0 + static_cast<double>(segs - 1) * (1.0 - params.overlap);
    len = static_cast<std::size_t>(static_cast<double>(n) / denom);
  }
  if (len < 2) throw DomainError("welch: segment length below 2");
  if (len > n) throw DomainError("welch: segment length exceeds series length");

  const std::size_t step = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(static_cast<double>(len) *
                                              (1.0 - params.overlap))));
  const std::vector<double> window =
      params.window == WindowKind::Rectangular ? std::vector<double>{}
                                               : make_window(params.window, len);

  Periodogram pg;
  pg.fs = fs;
  pg.power.assign(len / 2 + 1, 0.0);
  std::size_t count = 0;
  for (std::size_t off = 0; off + len <= n; off += step) {
    const auto psd = segment_psd(y.subspan(off, len), window, fs);
    for (std::size_t k = 0; k < psd.size(); ++k) pg.power[k] += psd[k];
    ++count;
  }
  const double inv = 1.0 / static_cast<double>(count);
  for (double& p : pg.power) p *= inv;

  pg.freqs.resize(pg.power.size());
  for (std::size_t k = 0; k < pg.freqs.size(); ++k) {
    pg.freqs[k] = fs * static_cast<double>(k) / static_cast<double>(len);
  }
  std::ostringstream os;
  os << "welch segments=" << count << " length=" << len << " overlap=" << params.overlap
     << " window=" << window_name(params.window);
  pg.method = os.str();
  return pg;
}

PowerLawPsdFit fit_power_law_psd(const Periodogram& pg) {
  PowerLawPsdFit fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 1; k < pg.freqs.size(); ++k) {
    if (!(pg.power[k] > 0.0) || !(pg.freqs[k] > 0.0)) {
      ++fit.bins_dropped;
      continue;
    }
    const double x = std::log(pg.freqs[k] / pg.fs);
    const double v = std::log(pg.power[k]);
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
    ++fit.bins_used;
  }
  if (fit.bins_used < 8) {
    throw DomainError("fit_power_law_psd: fewer than 8 usable spectral bins");
  }
  const double nd = static_cast<double>(fit.bins_used);
  const double det = nd * sxx - sx * sx;
  if (det == 0.0) throw DomainError("fit_power_law_psd: degenerate abscissa");
  fit.kappa = (nd * sxy - sx * sy) / det;
  fit.p0 = std::exp((sy - fit.kappa * sx) / nd);
  return fit;
}

void write_periodogram(const Periodogram& pg, std::ostream& out,
                       std::span<const std::pair<std::string, std::string>> headers) {
  for (const auto& [k, v] : headers) out << "# " << k << ": " << v << "\n";
  out << "# fs: " << format_g17(pg.fs) << "\n";
  out << "# method: " << pg.method << "\n";
  out << "# columns: frequency power\n";
  for (std::size_t k = 0; k < pg.freqs.size(); ++k) {
    out << format_g17(pg.freqs[k]) << " " << format_g17(pg.power[k]) << "\n";
  }
}

}  // namespace tsa
