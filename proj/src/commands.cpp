#include "tsa/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "tsa/errors.hpp"
#include "tsa/series_io.hpp"
#include "tsa/spectral.hpp"
#include "tsa/synthesis.hpp"

namespace fs = std::filesystem;

namespace tsa {

namespace {

std::string format_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.8g", v);
  return buf;
}

double col_dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Plain least-squares residuals, used to detrend before spectral analysis.
std::vector<double> ols_residuals(const DesignMatrix& design, std::span<const double> y) {
  const std::size_t m = design.a.cols();
  Matrix g(m, m);
  std::vector<double> aty(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = j; k < m; ++k) {
      const double v = col_dot(design.a.col(j), design.a.col(k));
      g(j, k) = v;
      g(k, j) = v;
    }
    aty[j] = col_dot(design.a.col(j), y);
  }
  const std::vector<double> x = spd_solve(g, aty);
  std::vector<double> r(y.begin(), y.end());
  for (std::size_t j = 0; j < m; ++j) {
    const auto col = design.a.col(j);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= x[j] * col[i];
  }
  return r;
}

std::vector<double> coefficients_from_config(const RunConfig& config,
                                             const TrajectoryModel& traj) {
  if (!config.coefficients.empty()) return config.coefficients;
  std::vector<double> c;
  constexpr double kOmegaYear = 2.0 * std::numbers::pi;
  for (const auto& term : traj.terms) {
    switch (term.kind) {
      case BasisTerm::Kind::Polynomial:
        c.push_back(config.intercept);
        if (term.degree >= 1) c.push_back(config.trend);
        for (int p = 2; p <= term.degree; ++p) c.push_back(0.0);
        break;
      case BasisTerm::Kind::Periodic:
        if (term.omega == kOmegaYear) {
          c.push_back(config.annual_cos);
          c.push_back(config.annual_sin);
        } else if (term.omega == 2.0 * kOmegaYear) {
          c.push_back(config.semiannual_cos);
          c.push_back(config.semiannual_sin);
        } else {
          c.push_back(0.0);
          c.push_back(0.0);
        }
        break;
      case BasisTerm::Kind::Offset:
        c.push_back(0.0);
        break;
    }
  }
  return c;
}

FitOptions fit_options_from_config(const RunConfig& config) {
  FitOptions opt;
  opt.minimizer.xatol = config.xatol;
  opt.minimizer.max_iter = config.max_iter;
  if (config.amplitude_mode == "profiled") {
    opt.amplitude_mode = AmplitudeMode::Profiled;
  } else if (config.amplitude_mode == "joint") {
    opt.amplitude_mode = AmplitudeMode::Joint;
  } else {
    throw SpecError("unknown amplitude_mode '" + config.amplitude_mode +
                    "' (expected profiled|joint)");
  }
  opt.path = config.toeplitz ? SolvePath::Toeplitz : SolvePath::Dense;
  opt.toeplitz_history = config.toeplitz_history;
  return opt;
}

struct FitOutcome {
  FitResult fit;
  std::string report;
  int code = 0;
};

FitOutcome fit_one(const fs::path& path, const RunConfig& config) {
  const TimeSeries ts = read_series(path);
  ts.validate_uniform();
  const TrajectoryModel traj = trajectory_from_config(config, ts.mjd.front());
  const NoiseModel family = noise_from_config(config);
  const FreeParams free_params = free_params_from_config(config);
  const FitOptions options = fit_options_from_config(config);

  const auto t0 = std::chrono::steady_clock::now();
  FitOutcome out;
  out.fit = mle_fit(ts, traj, family, free_params, options);
  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.report = fit_report(out.fit, ts, config, runtime);
  out.code = out.fit.converged ? 0 : 2;
  return out;
}

std::string one_line_summary(const fs::path& name, const FitResult& fit) {
  std::ostringstream os;
  os << name.filename().string() << ": " << (fit.converged ? "ok" : "WARN no convergence")
     << " " << fit.noise.describe() << " lnL=" << format_num(fit.ln_likelihood);
  return os.str();
}

int fit_directory(const RunConfig& config) {
  const fs::path dir = config.input;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".dat") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw SpecError("fit: no .dat series in '" + dir.string() + "'");

  fs::path out_dir = config.output.empty() ? dir : fs::path(config.output);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  std::size_t jobs = config.jobs != 0 ? config.jobs
                                      : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, files.size());

  std::atomic<std::size_t> next{0};
  std::atomic<int> worst{0};
  std::mutex io_mutex;

  auto bump = [&](int code) {
    int cur = worst.load();
    while (cur < code && !worst.compare_exchange_weak(cur, code)) {
    }
  };

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= files.size()) return;
      const fs::path& file = files[i];
      try {
        const FitOutcome out = fit_one(file, config);
        atomic_write_text(out_dir / (file.stem().string() + ".fit"), out.report);
        bump(out.code);
        const std::lock_guard<std::mutex> lock(io_mutex);
        std::cout << one_line_summary(file, out.fit) << "\n";
      } catch (const IoError& e) {
        bump(4);
        const std::lock_guard<std::mutex> lock(io_mutex);
        std::cerr << file.filename().string() << ": error: " << e.what() << "\n";
      } catch (const std::exception& e) {
        bump(3);
        const std::lock_guard<std::mutex> lock(io_mutex);
        std::cerr << file.filename().string() << ": error: " << e.what() << "\n";
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::cout << "fitted " << files.size() << " series with " << jobs << " worker"
            << (jobs == 1 ? "" : "s") << "\n";
  return worst.load();
}

std::vector<std::pair<std::string, std::string>> provenance(const RunConfig& config) {
  return config.resolved();
}

}  // namespace

TrajectoryModel trajectory_from_config(const RunConfig& config, double mjd_start) {
  TrajectoryModel m = TrajectoryModel::standard(config.poly_degree, config.annual,
                                                config.semiannual);
  for (const double years : config.periods) {
    if (!(years > 0.0)) throw SpecError("trajectory: non-positive period");
    m.terms.push_back(BasisTerm::periodic(2.0 * std::numbers::pi / years));
  }
  for (const double mjd : config.offsets_mjd) {
    m.terms.push_back(BasisTerm::offset((mjd - mjd_start) / 365.25));
  }
  m.validate();
  return m;
}

NoiseModel noise_from_config(const RunConfig& config) {
  NoiseModel m;
  m.kind = noise_kind_from_name(config.noise);
  m.kappa = config.kappa;
  m.kappa2 = config.kappa2;
  m.phi = config.phi;
  m.phi_mix = config.phi_mix;
  m.sigma = config.sigma;
  switch (m.kind) {
    case NoiseKind::White:
      m.kappa = 0.0;
      break;
    case NoiseKind::Flicker:
      m.kappa = -1.0;
      break;
    case NoiseKind::RandomWalk:
      m.kappa = -2.0;
      break;
    default:
      break;
  }
  if (m.kind != NoiseKind::Ggm && m.kind != NoiseKind::Figgm) m.phi = 1.0;
  if (m.kind != NoiseKind::PowerLawPlusWhite) m.phi_mix = 1.0;
  m.validate();
  return m;
}

FreeParams free_params_from_config(const RunConfig& config) {
  FreeParams fp = FreeParams::all_for(noise_kind_from_name(config.noise));
  for (const std::string& name : config.fix) {
    if (name == "kappa") fp.kappa = false;
    else if (name == "kappa2") fp.kappa2 = false;
    else if (name == "phi") fp.phi = false;
    else if (name == "phi_mix") fp.phi_mix = false;
    else if (name == "sigma") fp.sigma = false;
    else if (name == "all") fp = FreeParams{};
    else throw SpecError("fit: unknown parameter '" + name + "' in fix list");
  }
  return fp;
}

std::string fit_report(const FitResult& fit, const TimeSeries& series,
                       const RunConfig& config, double runtime_s) {
  std::ostringstream os;
  for (const auto& [k, v] : provenance(config)) os << "# " << k << ": " << v << "\n";

  if (!series.station.empty()) os << "station: " << series.station << "\n";
  if (!series.component.empty()) os << "component: " << series.component << "\n";
  os << "samples: " << series.size() << "\n";
  os << "converged: " << (fit.converged ? "yes" : "no") << "\n";
  os << "at_boundary: " << (fit.at_boundary ? "yes" : "no") << "\n";
  os << "evaluations: " << fit.evaluations << "\n";
  os << "restarts: " << fit.restarts << "\n";
  os << "ln_likelihood: " << format_g17(fit.ln_likelihood) << "\n";

  const NoiseModel& nm = fit.noise;
  os << "noise_model: " << noise_kind_name(nm.kind) << "\n";
  os << "kappa_hat: " << format_num(nm.canonical_kappa()) << "\n";
  if (nm.kind == NoiseKind::Figgm) os << "kappa2_hat: " << format_num(nm.kappa2) << "\n";
  if (nm.kind == NoiseKind::Ggm || nm.kind == NoiseKind::Figgm) {
    os << "phi_hat: " << format_num(nm.phi) << "\n";
  }
  if (nm.kind == NoiseKind::PowerLawPlusWhite) {
    const AmplitudePair scaled =
        scale_amplitude(nm.sigma, nm.phi_mix, nm.kappa, series.sampling_days / 365.25);
    os << "phi_mix_hat: " << format_num(nm.phi_mix) << "\n";
    os << "sigma_pl: " << format_num(nm.sigma_pl()) << "\n";
    os << "sigma_w: " << format_num(nm.sigma_w()) << "\n";
    os << "sigma_pl_yr: " << format_num(scaled.sigma_pl) << "\n";
  }
  os << "sigma_driver: " << format_num(nm.sigma) << "\n";

  for (std::size_t j = 0; j < fit.coefficients.size(); ++j) {
    os << fit.labels[j] << ": " << format_num(fit.coefficients[j]) << " +/- "
       << format_num(std::sqrt(std::max(0.0, fit.cx(j, j)))) << "\n";
  }

  // Amplitude and phase for each cos/sin pair, uncertainty by the delta
  // method on the amplitude.
  for (std::size_t j = 0; j + 1 < fit.labels.size(); ++j) {
    const std::string& lc = fit.labels[j];
    if (lc.rfind("cos_", 0) != 0) continue;
    const std::string suffix = lc.substr(4);
    if (fit.labels[j + 1] != "sin_" + suffix) continue;
    const double c = fit.coefficients[j];
    const double s = fit.coefficients[j + 1];
    const AmpPhase ap = amp_phase(c, s);
    os << "amp_" << suffix << ": " << format_num(ap.amplitude);
    if (ap.amplitude > 0.0) {
      const double var = (c * c * fit.cx(j, j) + s * s * fit.cx(j + 1, j + 1) +
                          2.0 * c * s * fit.cx(j, j + 1)) /
                         (ap.amplitude * ap.amplitude);
      os << " +/- " << format_num(std::sqrt(std::max(0.0, var)));
    }
    os << "\n";
    os << "phase_" << suffix << "_rad: " << format_num(ap.phase) << "\n";
  }

  os << "runtime_s: " << format_num(runtime_s) << "\n";
  return os.str();
}

int cmd_simulate(const RunConfig& config) {
  if (config.output.empty()) throw SpecError("simulate: --output is required");

  SynthesisRecipe recipe;
  recipe.trajectory = trajectory_from_config(config, config.mjd_start);
  recipe.coefficients = coefficients_from_config(config, recipe.trajectory);
  recipe.noise = noise_from_config(config);
  recipe.n = config.n;
  recipe.seed = config.seed;
  recipe.mjd_start = config.mjd_start;
  recipe.sampling_days = config.sampling_days;
  recipe.station = config.station;
  recipe.component = config.component;

  const TimeSeries ts = generate_series(recipe);
  write_series(ts, config.output, provenance(config));
  std::cout << "wrote " << config.output << " (" << ts.size() << " samples, "
            << recipe.noise.describe() << ", seed " << recipe.seed << ")\n";
  return 0;
}

int cmd_fit(const RunConfig& config) {
  if (config.input.empty()) throw SpecError("fit: --input is required");
  if (fs::is_directory(config.input)) return fit_directory(config);

  const FitOutcome out = fit_one(config.input, config);
  if (config.output.empty()) {
    std::cout << out.report;
  } else {
    atomic_write_text(config.output, out.report);
    std::cout << one_line_summary(config.input, out.fit) << "\n";
  }
  if (!out.fit.converged) {
    std::cerr << "warning: fit did not converge within limits\n";
  }
  return out.code;
}

int cmd_spectrum(const RunConfig& config) {
  if (config.input.empty()) throw SpecError("spectrum: --input is required");
  if (config.output.empty()) throw SpecError("spectrum: --output is required");

  const TimeSeries ts = read_series(config.input);
  ts.validate_uniform();
  const double fs = ts.sampling_frequency_cpy();

  std::vector<double> values = ts.values;
  if (config.detrend) {
    const TrajectoryModel traj = trajectory_from_config(config, ts.mjd.front());
    const std::vector<double> t = ts.epochs_years();
    values = ols_residuals(build_design_matrix(traj, t), ts.values);
  }

  Periodogram pg;
  if (config.method == "welch") {
    WelchParams params;
    params.segments = config.segments;
    params.segment_length = config.segment_length;
    params.overlap = config.overlap;
    params.window = window_from_name(config.window);
    pg = welch(values, fs, params);
  } else if (config.method == "raw") {
    pg = periodogram(values, fs);
  } else {
    throw SpecError("spectrum: unknown method '" + config.method +
                    "' (expected raw|welch)");
  }

  std::ostringstream os;
  auto headers = provenance(config);
  if (!ts.station.empty()) headers.emplace_back("series_station", ts.station);
  if (!ts.component.empty()) headers.emplace_back("series_component", ts.component);
  write_periodogram(pg, os, headers);
  atomic_write_text(config.output, os.str());
  std::cout << "wrote " << config.output << " (" << pg.power.size() << " bins, "
            << pg.method << ", fs " << format_num(fs) << " cpy)\n";
  return 0;
}

int cmd_benchmark(const RunConfig& config) {
  if (config.output.empty()) throw SpecError("benchmark: --output directory is required");
  BenchmarkOptions options;
  options.stations = config.stations;
  // The benchmark dataset is 5000 epochs per series; the shared 'n' default
  // (500) belongs to simulate, so only an explicit n overrides it here.
  options.n = config.was_set("n") ? config.n : BenchmarkOptions{}.n;
  options.mjd_start = config.mjd_start;
  const auto truths = generate_benchmark(config.output, config.seed, options);
  std::cout << "wrote " << truths.size() << " series and truth.txt under "
            << config.output << " (master seed " << config.seed << ")\n";
  return 0;
}

int run_command(const std::string& name, const RunConfig& config) {
  try {
    RunConfig c = config;
    c.command = name;
    if (name == "simulate") return cmd_simulate(c);
    if (name == "fit") return cmd_fit(c);
    if (name == "spectrum") return cmd_spectrum(c);
    if (name == "benchmark") return cmd_benchmark(c);
    throw SpecError("unknown command '" + name + "'");
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace tsa
