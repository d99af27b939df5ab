#include "tsa/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "tsa/errors.hpp"
#include "tsa/series_io.hpp"

namespace tsa {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double to_double(const std::string& key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw SpecError("config: bad numeric value for '" + key + "': '" + std::string(v) + "'");
  }
  return out;
}

template <typename T>
T to_unsigned(const std::string& key, std::string_view v) {
  T out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw SpecError("config: bad integer value for '" + key + "': '" + std::string(v) + "'");
  }
  return out;
}

int to_int(const std::string& key, std::string_view v) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw SpecError("config: bad integer value for '" + key + "': '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw SpecError("config: bad boolean value for '" + key + "': '" + std::string(v) + "'");
}

std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    const std::string_view item = trim(v.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<double> to_double_list(const std::string& key, std::string_view v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ",";
    out += items[i];
  }
  return out;
}

std::string join(const std::vector<double>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ",";
    out += format_g17(items[i]);
  }
  return out;
}

std::string bool_name(bool b) { return b ? "true" : "false"; }

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string value{trim(raw)};
  if (key == "command") command = value;
  else if (key == "input") input = value;
  else if (key == "output") output = value;
  else if (key == "noise") noise = value;
  else if (key == "kappa") kappa = to_double(key, value);
  else if (key == "kappa2") kappa2 = to_double(key, value);
  else if (key == "phi") phi = to_double(key, value);
  else if (key == "phi_mix") phi_mix = to_double(key, value);
  else if (key == "sigma") sigma = to_double(key, value);
  else if (key == "fix") fix = split_list(value);
  else if (key == "xatol") xatol = to_double(key, value);
  else if (key == "max_iter") max_iter = to_unsigned<std::size_t>(key, value);
  else if (key == "amplitude_mode") amplitude_mode = value;
  else if (key == "toeplitz") toeplitz = to_bool(key, value);
  else if (key == "toeplitz_history") toeplitz_history = to_unsigned<std::size_t>(key, value);
  else if (key == "poly_degree") poly_degree = to_int(key, value);
  else if (key == "annual") annual = to_bool(key, value);
  else if (key == "semiannual") semiannual = to_bool(key, value);
  else if (key == "periods") periods = to_double_list(key, value);
  else if (key == "offsets_mjd") offsets_mjd = to_double_list(key, value);
  else if (key == "n") n = to_unsigned<std::size_t>(key, value);
  else if (key == "seed") seed = to_unsigned<std::uint64_t>(key, value);
  else if (key == "mjd_start") mjd_start = to_double(key, value);
  else if (key == "sampling_days") sampling_days = to_double(key, value);
  else if (key == "station") station = value;
  else if (key == "component") component = value;
  else if (key == "stations") stations = to_unsigned<std::size_t>(key, value);
  else if (key == "intercept") intercept = to_double(key, value);
  else if (key == "trend") trend = to_double(key, value);
  else if (key == "annual_cos") annual_cos = to_double(key, value);
  else if (key == "annual_sin") annual_sin = to_double(key, value);
  else if (key == "semiannual_cos") semiannual_cos = to_double(key, value);
  else if (key == "semiannual_sin") semiannual_sin = to_double(key, value);
  else if (key == "coefficients") coefficients = to_double_list(key, value);
  else if (key == "method") method = value;
  else if (key == "segments") segments = to_unsigned<std::size_t>(key, value);
  else if (key == "segment_length") segment_length = to_unsigned<std::size_t>(key, value);
  else if (key == "overlap") overlap = to_double(key, value);
  else if (key == "window") window = value;
  else if (key == "detrend") detrend = to_bool(key, value);
  else if (key == "jobs") jobs = to_unsigned<std::size_t>(key, value);
  else throw SpecError("config: unknown key '" + key + "'");
  if (std::find(assigned_.begin(), assigned_.end(), key) == assigned_.end()) {
    assigned_.push_back(key);
  }
}

bool RunConfig::was_set(const std::string& key) const {
  return std::find(assigned_.begin(), assigned_.end(), key) != assigned_.end();
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos) {
      throw SpecError("config " + path.string() + ":" + std::to_string(lineno) +
                      ": expected 'key = value'");
    }
    const std::string key{trim(sv.substr(0, eq))};
    const std::string value{trim(sv.substr(eq + 1))};
    set(key, value);
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
  std::vector<std::pair<std::string, std::string>> kv;
  auto add = [&](const char* k, std::string v) { kv.emplace_back(k, std::move(v)); };

  if (!command.empty()) add("command", command);
  if (!input.empty()) add("input", input);
  add("noise", noise);
  add("kappa", format_g17(kappa));
  add("kappa2", format_g17(kappa2));
  add("phi", format_g17(phi));
  add("phi_mix", format_g17(phi_mix));
  add("sigma", format_g17(sigma));
  if (!fix.empty()) add("fix", join(fix));
  add("amplitude_mode", amplitude_mode);
  add("xatol", format_g17(xatol));
  add("max_iter", std::to_string(max_iter));
  add("toeplitz", bool_name(toeplitz));
  add("toeplitz_history", std::to_string(toeplitz_history));
  add("poly_degree", std::to_string(poly_degree));
  add("annual", bool_name(annual));
  add("semiannual", bool_name(semiannual));
  if (!periods.empty()) add("periods", join(periods));
  if (!offsets_mjd.empty()) add("offsets_mjd", join(offsets_mjd));
  add("n", std::to_string(n));
  add("seed", std::to_string(seed));
  add("mjd_start", format_g17(mjd_start));
  add("sampling_days", format_g17(sampling_days));
  add("station", station);
  add("component", component);
  add("stations", std::to_string(stations));
  add("intercept", format_g17(intercept));
  add("trend", format_g17(trend));
  add("annual_cos", format_g17(annual_cos));
  add("annual_sin", format_g17(annual_sin));
  add("semiannual_cos", format_g17(semiannual_cos));
  add("semiannual_sin", format_g17(semiannual_sin));
  if (!coefficients.empty()) add("coefficients", join(coefficients));
  add("method", method);
  add("segments", std::to_string(segments));
  add("segment_length", std::to_string(segment_length));
  add("overlap", format_g17(overlap));
  add("window", window);
  add("detrend", bool_name(detrend));
  add("jobs", std::to_string(jobs));
  return kv;
}

}  // namespace tsa
