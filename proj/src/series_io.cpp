#include "tsa/series_io.hpp"

#include <atomic>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tsa/errors.hpp"

namespace tsa {

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

TimeSeries read_series(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "': " + std::strerror(errno));

  TimeSeries ts;
  bool sampling_from_header = false;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::size_t> data_lines;

  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    if (sv.front() == '#') {
      sv.remove_prefix(1);
      const auto colon = sv.find(':');
      if (colon == std::string_view::npos) {
        throw FormatError(path.string() + ":" + std::to_string(lineno) +
                          ": header line without 'key: value'");
      }
      const std::string key(trim(sv.substr(0, colon)));
      const std::string value(trim(sv.substr(colon + 1)));
      ts.headers.emplace_back(key, value);
      if (key == "station") ts.station = value;
      if (key == "component") ts.component = value;
      if (key == "sampling_days") {
        if (!parse_double(value, ts.sampling_days)) {
          throw FormatError(path.string() + ":" + std::to_string(lineno) +
                            ": bad sampling_days value '" + value + "'");
        }
        sampling_from_header = true;
      }
      continue;
    }

    std::istringstream ls{std::string(sv)};
    std::string t1, t2, extra;
    ls >> t1 >> t2;
    if (t2.empty() || (ls >> extra)) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) +
                        ": expected 'MJD value'");
    }
    double mjd = 0.0, value = 0.0;
    if (!parse_double(t1, mjd) || !parse_double(t2, value)) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) +
                        ": unparseable number");
    }
    ts.mjd.push_back(mjd);
    ts.values.push_back(value);
    data_lines.push_back(lineno);
  }

  if (ts.mjd.empty()) {
    throw FormatError(path.string() + ": no data lines");
  }
  if (!sampling_from_header && ts.mjd.size() > 1) {
    ts.sampling_days = ts.mjd[1] - ts.mjd[0];
  }
  for (std::size_t i = 1; i < ts.mjd.size(); ++i) {
    const double dt = ts.mjd[i] - ts.mjd[i - 1];
    if (!(dt > 0.0)) {
      throw FormatError(path.string() + ":" + std::to_string(data_lines[i]) +
                        ": epochs not strictly increasing");
    }
    if (std::abs(dt - ts.sampling_days) > 1e-6) {
      throw FormatError(path.string() + ":" + std::to_string(data_lines[i]) +
                        ": non-uniform sampling interval");
    }
  }
  return ts;
}

std::string format_series(const TimeSeries& ts,
                          const std::vector<std::pair<std::string, std::string>>& extra_headers) {
  std::ostringstream os;
  for (const auto& [k, v] : ts.headers) os << "# " << k << ": " << v << "\n";
  for (const auto& [k, v] : extra_headers) os << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < ts.mjd.size(); ++i) {
    os << format_g17(ts.mjd[i]) << " " << format_g17(ts.values[i]) << "\n";
  }
  return os.str();
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  const unsigned id = counter.fetch_add(1, std::memory_order_relaxed);
  std::filesystem::path tmp = path;
  tmp += ".tmp" + std::to_string(id);

  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot create '" + tmp.string() + "': " + std::strerror(errno));
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed for '" + tmp.string() + "'");
    }
  }

  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename temporary file onto '" + path.string() +
                  "': " + ec.message());
  }
}

void write_series(const TimeSeries& ts, const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, std::string>>& extra_headers) {
  atomic_write_text(path, format_series(ts, extra_headers));
}

}  // namespace tsa
