#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smax/harness.hpp"

namespace smax::csv {

inline constexpr const char* kRecordHeader =
    "agents,m,noise_power,correction,termination_parameter,runs,success_rate,"
    "average_iterations_in_successful_runs,average_survivor_count,timeout_rate,base_seed";

/// Shortest round-trip fixed-point form; "-inf"/"inf"/"nan" for non-finite values.
std::string format_number(double v);
std::string format_optional(const std::optional<double>& v);

void write_records(std::ostream& out, std::span<const ExperimentRecord> records);

/// A parsed CSV table.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of `name` in the header; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
};

/// Minimal reader for the files this project writes (no quoting).
Table read_table(std::istream& in);

/// Writes `contents` to a temporary sibling of `path` and renames it into
/// place. Throws std::runtime_error naming `path` on failure.
void write_file_atomically(const std::string& path, const std::string& contents);

}  // namespace smax::csv
