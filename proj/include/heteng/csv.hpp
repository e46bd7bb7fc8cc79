#pragma once

#include <cstdio>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>

#include "heteng/metrics.hpp"

namespace heteng {

inline constexpr const char* kCsvHeader =
    "round,alive_count,total_residual_j,coverage_fraction,ch_fraction,"
    "election_iterations";

namespace detail {

/// Fixed 9-significant-digit rendering so reruns are byte-identical.
inline std::string format_value(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

}  // namespace detail

inline std::string csv_row(const RoundMetrics& row) {
  std::string line = std::to_string(row.round);
  line += ',';
  line += detail::format_value(row.alive_count);
  line += ',';
  line += detail::format_value(row.total_residual_j);
  line += ',';
  line += detail::format_value(row.coverage_fraction);
  line += ',';
  line += detail::format_value(row.ch_fraction);
  line += ',';
  line += detail::format_value(row.election_iterations);
  return line;
}

inline std::string to_csv(std::span<const RoundMetrics> series) {
  if (series.empty())
    throw std::invalid_argument("to_csv: series must be nonempty");
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& row : series) {
    out += csv_row(row);
    out += '\n';
  }
  return out;
}

inline void write_csv(std::span<const RoundMetrics> series,
                      const std::string& path) {
  const std::string content = to_csv(series);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("write_csv: cannot open " + path);
  file.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!file) throw std::runtime_error("write_csv: write failed for " + path);
}

}  // namespace heteng
