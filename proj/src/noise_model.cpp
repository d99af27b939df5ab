#include "tsa/noise_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tsa/errors.hpp"

namespace tsa {

namespace {

constexpr double kPi = std::numbers::pi;

void check_kappa(double kappa, const char* who) {
  if (!(kappa >= kKappaMin && kappa <= kKappaMax)) {
    std::ostringstream os;
    os << who << ": spectral index " << kappa << " outside [" << kKappaMin << ", "
       << kKappaMax << "]";
    throw DomainError(os.str());
  }
}

void check_phi(double phi, const char* who) {
  if (!(phi > 0.0 && phi <= 1.0)) {
    std::ostringstream os;
    os << who << ": phi " << phi << " outside (0, 1]";
    throw DomainError(os.str());
  }
}

void check_n(std::size_t n, const char* who) {
  if (n == 0) throw DomainError(std::string(who) + ": empty request (n = 0)");
}

}  // namespace

NoiseKind noise_kind_from_name(std::string_view name) {
  if (name == "wn") return NoiseKind::White;
  if (name == "pl") return NoiseKind::PowerLaw;
  if (name == "fn") return NoiseKind::Flicker;
  if (name == "rw") return NoiseKind::RandomWalk;
  if (name == "ggm") return NoiseKind::Ggm;
  if (name == "figgm") return NoiseKind::Figgm;
  if (name == "plwn") return NoiseKind::PowerLawPlusWhite;
  throw SpecError("unknown noise model '" + std::string(name) +
                  "' (expected wn|pl|fn|rw|ggm|figgm|plwn)");
}

std::string_view noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::White: return "wn";
    case NoiseKind::PowerLaw: return "pl";
    case NoiseKind::Flicker: return "fn";
    case NoiseKind::RandomWalk: return "rw";
    case NoiseKind::Ggm: return "ggm";
    case NoiseKind::Figgm: return "figgm";
    case NoiseKind::PowerLawPlusWhite: return "plwn";
  }
  return "?";
}

double NoiseModel::canonical_kappa() const {
  switch (kind) {
    case NoiseKind::White: return 0.0;
    case NoiseKind::Flicker: return -1.0;
    case NoiseKind::RandomWalk: return -2.0;
    default: return kappa;
  }
}

bool NoiseModel::stationary() const {
  switch (kind) {
    case NoiseKind::White:
      return true;
    case NoiseKind::Ggm:
      return phi < 1.0 || kappa >= -1.0;
    case NoiseKind::Figgm:
      // The integration stage dominates at low frequency once the Ggm stage
      // is damped; with phi = 1 both indices accumulate.
      return phi < 1.0 ? kappa2 >= -1.0 : kappa + kappa2 >= -1.0;
    case NoiseKind::PowerLawPlusWhite:
      return phi_mix == 0.0 || canonical_kappa() >= -1.0;
    default:
      return canonical_kappa() >= -1.0;
  }
}

double NoiseModel::sigma_pl() const {
  return kind == NoiseKind::PowerLawPlusWhite ? sigma * std::sqrt(phi_mix) : sigma;
}

double NoiseModel::sigma_w() const {
  return kind == NoiseKind::PowerLawPlusWhite ? sigma * std::sqrt(1.0 - phi_mix)
                                              : 0.0;
}

NoiseModel NoiseModel::power_law_plus_white(double sigma_pl, double sigma_w,
                                            double kappa) {
  if (sigma_pl < 0.0 || sigma_w < 0.0) {
    throw DomainError("power_law_plus_white: negative amplitude");
  }
  NoiseModel m;
  m.kind = NoiseKind::PowerLawPlusWhite;
  m.kappa = kappa;
  m.sigma = std::hypot(sigma_pl, sigma_w);
  m.phi_mix = m.sigma > 0.0 ? (sigma_pl * sigma_pl) / (m.sigma * m.sigma) : 0.0;
  m.validate();
  return m;
}

void NoiseModel::validate() const {
  check_kappa(canonical_kappa(), "NoiseModel");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw DomainError("NoiseModel: sigma must be finite and non-negative");
  }
  switch (kind) {
    case NoiseKind::Ggm:
      check_phi(phi, "NoiseModel");
      break;
    case NoiseKind::Figgm:
      check_phi(phi, "NoiseModel");
      check_kappa(kappa2, "NoiseModel");
      break;
    case NoiseKind::PowerLawPlusWhite:
      if (!(phi_mix >= 0.0 && phi_mix <= 1.0)) {
        throw DomainError("NoiseModel: phi_mix outside [0, 1]");
      }
      break;
    default:
      break;
  }
}

std::string NoiseModel::describe() const {
  std::ostringstream os;
  os << noise_kind_name(kind) << "(kappa=" << canonical_kappa();
  if (kind == NoiseKind::Figgm) os << ", kappa2=" << kappa2;
  if (kind == NoiseKind::Ggm || kind == NoiseKind::Figgm) os << ", phi=" << phi;
  if (kind == NoiseKind::PowerLawPlusWhite) os << ", phi_mix=" << phi_mix;
  os << ", sigma=" << sigma << ")";
  return os.str();
}

FilterCoefficients powerlaw_filter(double kappa, std::size_t n) {
  check_n(n, "powerlaw_filter");
  check_kappa(kappa, "powerlaw_filter");
  FilterCoefficients fc;
  fc.kappa = kappa;
  fc.h.resize(n);
  fc.h[0] = 1.0;
  const double half = 0.5 * kappa;
  for (std::size_t i = 1; i < n; ++i) {
    fc.h[i] = (static_cast<double>(i) - half - 1.0) * fc.h[i - 1] / static_cast<double>(i);
  }
  return fc;
}

FilterCoefficients ggm_filter(double kappa, double phi, std::size_t n) {
  check_n(n, "ggm_filter");
  check_kappa(kappa, "ggm_filter");
  check_phi(phi, "ggm_filter");
  FilterCoefficients fc;
  fc.kappa = kappa;
  fc.phi = phi;
  fc.h.resize(n);
  fc.h[0] = 1.0;
  const double half = 0.5 * kappa;
  for (std::size_t i = 1; i < n; ++i) {
    fc.h[i] =
        (static_cast<double>(i) - half - 1.0) * phi * fc.h[i - 1] / static_cast<double>(i);
  }
  return fc;
}

FilterCoefficients figgm_filter(double kappa1, double kappa2, double phi, std::size_t n) {
  check_n(n, "figgm_filter");
  const FilterCoefficients a = powerlaw_filter(kappa2, n);
  const FilterCoefficients b = ggm_filter(kappa1, phi, n);
  FilterCoefficients fc;
  fc.kappa = kappa1 + kappa2;
  fc.phi = phi;
  fc.h.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = a.h[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j + i < n; ++j) fc.h[i + j] += ai * b.h[j];
  }
  return fc;
}

FilterCoefficients filter_coefficients(const NoiseModel& model, std::size_t n) {
  model.validate();
  switch (model.kind) {
    case NoiseKind::White: {
      FilterCoefficients fc;
      fc.h.assign(n == 0 ? 0 : n, 0.0);
      check_n(n, "filter_coefficients");
      fc.h[0] = 1.0;
      return fc;
    }
    case NoiseKind::Ggm:
      return ggm_filter(model.kappa, model.phi, n);
    case NoiseKind::Figgm:
      return figgm_filter(model.kappa, model.kappa2, model.phi, n);
    case NoiseKind::PowerLawPlusWhite:
      return powerlaw_filter(model.kappa, n);
    default:
      return powerlaw_filter(model.canonical_kappa(), n);
  }
}

double psd_powerlaw(double f, double kappa, double sigma, double fs) {
  check_kappa(kappa, "psd_powerlaw");
  if (!(fs > 0.0)) throw DomainError("psd_powerlaw: fs must be positive");
  if (f < 0.0 || f > 0.5 * fs) throw DomainError("psd_powerlaw: f outside [0, fs/2]");
  if (f == 0.0 && kappa < 0.0) {
    throw DomainError("psd_powerlaw: spectrum diverges at f = 0 for kappa < 0");
  }
  const double s = 2.0 * std::sin(kPi * f / fs);
  return 2.0 * sigma * sigma / fs * std::pow(s, kappa);
}

double psd_ggm(double f, double kappa, double phi, double sigma, double fs) {
  check_kappa(kappa, "psd_ggm");
  check_phi(phi, "psd_ggm");
  if (!(fs > 0.0)) throw DomainError("psd_ggm: fs must be positive");
  if (f < 0.0 || f > 0.5 * fs) throw DomainError("psd_ggm: f outside [0, fs/2]");
  const double base = 1.0 + phi * phi - 2.0 * phi * std::cos(2.0 * kPi * f / fs);
  if (base <= 0.0 && kappa < 0.0) {
    throw DomainError("psd_ggm: spectrum diverges at f = 0 for phi = 1, kappa < 0");
  }
  return 2.0 * sigma * sigma / fs * std::pow(base, 0.5 * kappa);
}

double psd(const NoiseModel& model, double f, double fs) {
  model.validate();
  switch (model.kind) {
    case NoiseKind::White:
      return psd_powerlaw(f, 0.0, model.sigma, fs);
    case NoiseKind::Ggm:
      return psd_ggm(f, model.kappa, model.phi, model.sigma, fs);
    case NoiseKind::Figgm:
      // Chained filter: spectra multiply (unit driver), one overall sigma^2.
      return psd_ggm(f, model.kappa, model.phi, model.sigma, fs) *
             psd_powerlaw(f, model.kappa2, 1.0, fs) * (0.5 * fs);
    case NoiseKind::PowerLawPlusWhite:
      return psd_powerlaw(f, model.kappa, model.sigma_pl(), fs) +
             psd_powerlaw(f, 0.0, model.sigma_w(), fs);
    default:
      return psd_powerlaw(f, model.canonical_kappa(), model.sigma, fs);
  }
}

}  // namespace tsa
