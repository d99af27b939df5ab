#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tsa/commands.hpp"
#include "tsa/errors.hpp"
#include "tsa/run_config.hpp"

namespace {

// Every option funnels through RunConfig::set with the same keys a config
// file uses, so flag overrides and '# key: value' provenance stay in sync.
struct SubCli {
  CLI::App* app = nullptr;
  std::string config_file;
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::vector<std::string> fix;
  CLI::Option* fix_opt = nullptr;
  CLI::Option* toeplitz_opt = nullptr;
  CLI::Option* no_annual_opt = nullptr;
  CLI::Option* no_semiannual_opt = nullptr;
  CLI::Option* no_detrend_opt = nullptr;
};

void add_option(SubCli& s, const std::string& flag, const std::string& key,
                const std::string& desc) {
  s.options.emplace_back(key, s.app->add_option(flag, s.values[key], desc));
}

SubCli make_subcommand(CLI::App& app, const std::string& name, const std::string& desc) {
  SubCli s;
  s.app = app.add_subcommand(name, desc);
  s.app->add_option("--config", s.config_file, "config file of 'key = value' lines");

  add_option(s, "-i,--input", "input", "input series file (or directory for fit)");
  add_option(s, "-o,--output", "output", "output path");

  add_option(s, "--noise", "noise", "noise model: wn|pl|fn|rw|ggm|figgm|plwn");
  add_option(s, "--kappa", "kappa", "spectral index");
  add_option(s, "--kappa2", "kappa2", "figgm integration index");
  add_option(s, "--phi", "phi", "ggm damping factor");
  add_option(s, "--phi-mix", "phi_mix", "colored fraction of the plwn mixture");
  add_option(s, "--sigma", "sigma", "driver amplitude");

  s.fix_opt = s.app->add_option("--fix", s.fix,
                                "noise parameter to hold fixed (repeatable; "
                                "kappa|kappa2|phi|phi_mix|sigma|all)");
  add_option(s, "--xatol", "xatol", "simplex termination tolerance");
  add_option(s, "--max-iter", "max_iter", "simplex iteration limit");
  add_option(s, "--amplitude-mode", "amplitude_mode", "profiled|joint");
  s.toeplitz_opt = s.app->add_flag("--toeplitz",
                                   "use the stationary Toeplitz likelihood path");
  add_option(s, "--toeplitz-history", "toeplitz_history",
             "pre-sample taps for the Toeplitz autocovariance (0 = series length)");

  add_option(s, "--poly-degree", "poly_degree", "trajectory polynomial degree");
  s.no_annual_opt = s.app->add_flag("--no-annual", "drop the annual harmonic");
  s.no_semiannual_opt = s.app->add_flag("--no-semiannual", "drop the semiannual harmonic");
  add_option(s, "--periods", "periods", "extra periodic terms, years (comma list)");
  add_option(s, "--offsets-mjd", "offsets_mjd", "offset epochs, MJD (comma list)");

  add_option(s, "-n,--samples", "n", "sample count");
  add_option(s, "--seed", "seed", "random seed");
  add_option(s, "--mjd-start", "mjd_start", "first epoch, MJD");
  add_option(s, "--sampling-days", "sampling_days", "sampling interval, days");
  add_option(s, "--station", "station", "station id");
  add_option(s, "--component", "component", "component id");
  add_option(s, "--stations", "stations", "benchmark station count");
  add_option(s, "--intercept", "intercept", "true intercept, mm");
  add_option(s, "--trend", "trend", "true trend, mm/yr");
  add_option(s, "--annual-cos", "annual_cos", "true annual cosine coefficient");
  add_option(s, "--annual-sin", "annual_sin", "true annual sine coefficient");
  add_option(s, "--semiannual-cos", "semiannual_cos", "true semiannual cosine coefficient");
  add_option(s, "--semiannual-sin", "semiannual_sin", "true semiannual sine coefficient");
  add_option(s, "--coefficients", "coefficients",
             "explicit trajectory coefficients (comma list)");

  add_option(s, "--method", "method", "spectrum method: raw|welch");
  add_option(s, "--segments", "segments", "welch segment count");
  add_option(s, "--segment-length", "segment_length", "welch segment length");
  add_option(s, "--overlap", "overlap", "welch overlap fraction");
  add_option(s, "--window", "window", "welch window: rectangular|hann");
  s.no_detrend_opt = s.app->add_flag("--no-detrend",
                                     "skip trajectory removal before the spectrum");

  add_option(s, "-j,--jobs", "jobs", "worker threads for directory fits (0 = auto)");
  return s;
}

int apply(const SubCli& s, tsa::RunConfig& cfg) {
  try {
    if (!s.config_file.empty()) cfg.load_file(s.config_file);
    for (const auto& [key, opt] : s.options) {
      if (opt->count() > 0) cfg.set(key, s.values.at(key));
    }
    if (s.fix_opt->count() > 0) {
      std::string joined;
      for (std::size_t i = 0; i < s.fix.size(); ++i) {
        if (i > 0) joined += ",";
        joined += s.fix[i];
      }
      cfg.set("fix", joined);
    }
    if (s.toeplitz_opt->count() > 0) cfg.set("toeplitz", "true");
    if (s.no_annual_opt->count() > 0) cfg.set("annual", "false");
    if (s.no_semiannual_opt->count() > 0) cfg.set("semiannual", "false");
    if (s.no_detrend_opt->count() > 0) cfg.set("detrend", "false");
    // Welch flags imply the welch method unless one was named explicitly.
    if (cfg.method == "raw" && s.app->count("--method") == 0 &&
        (s.app->count("--segments") > 0 || s.app->count("--segment-length") > 0 ||
         s.app->count("--window") > 0 || s.app->count("--overlap") > 0)) {
      cfg.set("method", "welch");
    }
  } catch (const tsa::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajectory and correlated-noise analysis for evenly sampled series"};
  app.require_subcommand(1);

  SubCli subs[] = {
      make_subcommand(app, "simulate", "generate a synthetic series"),
      make_subcommand(app, "fit", "maximum likelihood trajectory + noise fit"),
      make_subcommand(app, "spectrum", "periodogram / Welch spectral estimate"),
      make_subcommand(app, "benchmark", "generate the synthetic benchmark dataset"),
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  for (const SubCli& s : subs) {
    if (!s.app->parsed()) continue;
    tsa::RunConfig cfg;
    const int rc = apply(s, cfg);
    if (rc != 0) return rc;
    return tsa::run_command(s.app->get_name(), cfg);
  }
  return 3;
}
