#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tsa/time_series.hpp"

namespace tsa {

// Series file contract: UTF-8 text, optional '# key: value' header lines,
// then one 'MJD value' pair per line separated by whitespace, LF endings,
// numbers written with 17 significant digits. Reading then writing a file
// reproduces it byte for byte.

// Throws IoError if unreadable, FormatError (with line number) on contract
// violations including non-increasing or non-uniform epochs.
TimeSeries read_series(const std::filesystem::path& path);

// Writes atomically (temp file + rename). extra_headers are emitted after
// the series' own headers.
void write_series(const TimeSeries& ts, const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, std::string>>& extra_headers = {});

std::string format_series(const TimeSeries& ts,
                          const std::vector<std::pair<std::string, std::string>>& extra_headers = {});

// Shared atomic text write used by every file-producing command.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

// 17-significant-digit number formatting used across all text outputs.
std::string format_g17(double v);

}  // namespace tsa
