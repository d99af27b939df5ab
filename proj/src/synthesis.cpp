#include "tsa/synthesis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tsa/errors.hpp"
#include "tsa/fft.hpp"
#include "tsa/rng.hpp"
#include "tsa/series_io.hpp"

namespace tsa {

namespace {

std::vector<double> gaussian_vector(std::size_t n, std::uint64_t seed) {
  GaussianRng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.next();
  return v;
}

}  // namespace

std::vector<double> generate_colored_noise(const FilterCoefficients& coeffs, double sigma,
                                           std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("generate_colored_noise: empty request (n = 0)");
  if (coeffs.h.size() < n) {
    throw DomainError("generate_colored_noise: fewer filter taps than samples");
  }
  if (!(sigma >= 0.0)) throw DomainError("generate_colored_noise: negative sigma");

  const std::vector<double> v = gaussian_vector(n, seed);
  std::vector<double> w =
      fft_convolve(std::span<const double>(coeffs.h).first(n), v, n);
  for (double& x : w) x *= sigma;
  return w;
}

std::vector<double> mix_colored_white(const FilterCoefficients& coeffs, double sigma,
                                      double phi_mix, std::size_t n, std::uint64_t seed) {
  if (!(phi_mix >= 0.0 && phi_mix <= 1.0)) {
    throw DomainError("mix_colored_white: phi_mix outside [0, 1]");
  }
  // Independent driver streams derived from the one seed: salt 1 colored,
  // salt 2 white.
  std::vector<double> w =
      generate_colored_noise(coeffs, std::sqrt(phi_mix), n, mix_seed(seed, 1));
  const std::vector<double> u = gaussian_vector(n, mix_seed(seed, 2));
  const double aw = std::sqrt(1.0 - phi_mix);
  for (std::size_t i = 0; i < n; ++i) w[i] = sigma * (w[i] + aw * u[i]);
  return w;
}

std::vector<double> mix_flicker_white(double sigma, double phi_mix, std::size_t n,
                                      std::uint64_t seed) {
  if (n == 0) throw DomainError("mix_flicker_white: empty request (n = 0)");
  return mix_colored_white(powerlaw_filter(-1.0, n), sigma, phi_mix, n, seed);
}

AmplitudePair scale_amplitude(double sigma, double phi_mix, double kappa, double dt_years) {
  if (!(dt_years > 0.0)) throw DomainError("scale_amplitude: dt_years must be positive");
  if (!(phi_mix >= 0.0 && phi_mix <= 1.0)) {
    throw DomainError("scale_amplitude: phi_mix outside [0, 1]");
  }
  if (!(kappa >= kKappaMin && kappa <= kKappaMax)) {
    throw DomainError("scale_amplitude: kappa outside its domain");
  }
  AmplitudePair p;
  p.sigma_pl = sigma * std::sqrt(phi_mix) * std::pow(dt_years, 0.25 * kappa);
  p.sigma_w = sigma * std::sqrt(1.0 - phi_mix);
  return p;
}

TimeSeries generate_series(const SynthesisRecipe& recipe) {
  if (recipe.n == 0) throw DomainError("generate_series: empty request (n = 0)");
  if (!(recipe.sampling_days > 0.0)) {
    throw DomainError("generate_series: sampling interval must be positive");
  }
  recipe.noise.validate();

  TimeSeries ts;
  ts.sampling_days = recipe.sampling_days;
  ts.station = recipe.station;
  ts.component = recipe.component;
  ts.mjd.resize(recipe.n);
  for (std::size_t i = 0; i < recipe.n; ++i) {
    ts.mjd[i] = recipe.mjd_start + static_cast<double>(i) * recipe.sampling_days;
  }

  std::vector<double> noise;
  if (recipe.noise.kind == NoiseKind::PowerLawPlusWhite) {
    noise = mix_colored_white(powerlaw_filter(recipe.noise.kappa, recipe.n),
                              recipe.noise.sigma, recipe.noise.phi_mix, recipe.n,
                              recipe.seed);
  } else {
    noise = generate_colored_noise(filter_coefficients(recipe.noise, recipe.n),
                                   recipe.noise.sigma, recipe.n, recipe.seed);
  }

  ts.values = std::move(noise);
  if (!recipe.trajectory.terms.empty()) {
    const std::vector<double> t = ts.epochs_years();
    const DesignMatrix design = build_design_matrix(recipe.trajectory, t);
    if (recipe.coefficients.size() != design.a.cols()) {
      throw SpecError("generate_series: coefficient count does not match trajectory (" +
                      std::to_string(recipe.coefficients.size()) + " vs " +
                      std::to_string(design.a.cols()) + ")");
    }
    for (std::size_t j = 0; j < design.a.cols(); ++j) {
      const auto col = design.a.col(j);
      const double c = recipe.coefficients[j];
      for (std::size_t i = 0; i < recipe.n; ++i) ts.values[i] += c * col[i];
    }
  } else if (!recipe.coefficients.empty()) {
    throw SpecError("generate_series: coefficients given without trajectory terms");
  }
  return ts;
}

std::vector<BenchmarkTruth> generate_benchmark(const std::filesystem::path& output_dir,
                                               std::uint64_t master_seed,
                                               const BenchmarkOptions& options) {
  if (options.stations == 0 || options.n == 0) {
    throw DomainError("generate_benchmark: empty request");
  }
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) {
    throw IoError("cannot create '" + output_dir.string() + "': " + ec.message());
  }

  struct ComponentSpec {
    const char* name;
    double sigma;
    double phi_mix;
  };
  // Horizontal components share one mixture; the vertical is noisier.
  const ComponentSpec specs[3] = {{"E", 1.4, 0.6}, {"N", 1.4, 0.6}, {"U", 4.8, 0.7}};

  std::vector<BenchmarkTruth> truths;
  truths.reserve(options.stations * 3);

  for (std::size_t s = 0; s < options.stations; ++s) {
    char station[16];
    std::snprintf(station, sizeof(station), "BSG%02zu", s + 1);
    const std::uint64_t station_seed = mix_seed(master_seed, s);

    for (std::size_t c = 0; c < 3; ++c) {
      const ComponentSpec& cs = specs[c];
      const std::uint64_t series_seed = mix_seed(station_seed, c);

      // Truth draws come from their own stream (salt 1); the noise driver
      // stream (salt 2) never sees them.
      GaussianRng draw(mix_seed(series_seed, 1));
      auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * draw.uniform(); };

      BenchmarkTruth truth;
      truth.station = station;
      truth.component = cs.name;
      truth.seed = mix_seed(series_seed, 2);
      truth.intercept = uniform(-10.0, 10.0);
      truth.trend = uniform(-5.0, 5.0);
      truth.annual_amp = uniform(0.5, 3.0);
      truth.annual_phase = uniform(0.0, 2.0 * std::numbers::pi);
      truth.semiannual_amp = uniform(0.2, 1.0);
      truth.semiannual_phase = uniform(0.0, 2.0 * std::numbers::pi);
      truth.sigma = cs.sigma;
      truth.phi_mix = cs.phi_mix;
      truth.kappa = -1.0;

      SynthesisRecipe recipe;
      recipe.trajectory = TrajectoryModel::standard(1, true, true);
      recipe.coefficients = {
          truth.intercept,
          truth.trend,
          truth.annual_amp * std::cos(truth.annual_phase),
          truth.annual_amp * std::sin(truth.annual_phase),
          truth.semiannual_amp * std::cos(truth.semiannual_phase),
          truth.semiannual_amp * std::sin(truth.semiannual_phase),
      };
      NoiseModel noise;
      noise.kind = NoiseKind::PowerLawPlusWhite;
      noise.kappa = truth.kappa;
      noise.sigma = truth.sigma;
      noise.phi_mix = truth.phi_mix;
      recipe.noise = noise;
      recipe.n = options.n;
      recipe.seed = truth.seed;
      recipe.mjd_start = options.mjd_start;
      recipe.station = station;
      recipe.component = cs.name;

      const TimeSeries ts = generate_series(recipe);

      std::string coeffs;
      for (std::size_t j = 0; j < recipe.coefficients.size(); ++j) {
        if (j > 0) coeffs += ",";
        coeffs += format_g17(recipe.coefficients[j]);
      }
      std::vector<std::pair<std::string, std::string>> headers = {
          {"station", recipe.station},
          {"component", recipe.component},
          {"sampling_days", format_g17(recipe.sampling_days)},
          {"mjd_start", format_g17(recipe.mjd_start)},
          {"n", std::to_string(recipe.n)},
          {"seed", std::to_string(recipe.seed)},
          {"noise", "plwn"},
          {"kappa", format_g17(noise.kappa)},
          {"sigma", format_g17(noise.sigma)},
          {"phi_mix", format_g17(noise.phi_mix)},
          {"poly_degree", "1"},
          {"annual", "true"},
          {"semiannual", "true"},
          {"coefficients", coeffs},
      };
      write_series(ts, output_dir / (truth.station + "_" + truth.component + ".dat"),
                   headers);
      truths.push_back(truth);
    }
  }

  std::ostringstream manifest;
  manifest << "# columns: station component seed intercept trend annual_amp "
              "annual_phase semiannual_amp semiannual_phase sigma phi_mix kappa\n";
  for (const auto& t : truths) {
    manifest << t.station << " " << t.component << " " << t.seed << " "
             << format_g17(t.intercept) << " " << format_g17(t.trend) << " "
             << format_g17(t.annual_amp) << " " << format_g17(t.annual_phase) << " "
             << format_g17(t.semiannual_amp) << " " << format_g17(t.semiannual_phase)
             << " " << format_g17(t.sigma) << " " << format_g17(t.phi_mix) << " "
             << format_g17(t.kappa) << "\n";
  }
  atomic_write_text(output_dir / "truth.txt", manifest.str());
  return truths;
}

}  // namespace tsa
