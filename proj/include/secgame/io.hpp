#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <string>

#include "secgame/errors.hpp"
#include "secgame/sweep.hpp"

namespace secgame {

enum class OutputFormat { csv, jsonl };

inline std::optional<OutputFormat> output_format_from_string(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "jsonl") return OutputFormat::jsonl;
  return std::nullopt;
}

// 17 significant digits: doubles round-trip exactly and identical runs diff
// clean.
inline std::string format_float(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

inline void write_csv(const SweepResult& result, std::ostream& os) {
  for (std::size_t i = 0; i < result.columns.size(); ++i) {
    if (i > 0) os << ',';
    os << result.columns[i];
  }
  os << '\n';
  for (const auto& row : result.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) os << ',';
      os << format_float(row[i]);
    }
    os << '\n';
  }
}

inline void write_jsonl(const SweepResult& result, std::ostream& os) {
  for (const auto& row : result.rows) {
    Json line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line[result.columns[i]] = row[i];
    }
    os << line.dump() << '\n';
  }
}

inline std::string metadata_path(const std::string& output_path) {
  return output_path + ".meta.json";
}

inline std::string iso8601_utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

// Writes the rows in the requested format plus a sibling <path>.meta.json.
// The timestamp lives in the metadata only, so repeated runs with the same
// configuration produce byte-identical data files.
inline void write_result_file(const SweepResult& result, const std::string& path,
                              OutputFormat format) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw ConfigError("output_path", "cannot open '" + path + "' for writing");
  }
  if (format == OutputFormat::csv) {
    write_csv(result, os);
  } else {
    write_jsonl(result, os);
  }
  os.close();

  Json meta = result.metadata;
  meta["generated_at"] = iso8601_utc_now();
  std::ofstream meta_os(metadata_path(path), std::ios::binary);
  if (!meta_os) {
    throw ConfigError("output_path",
                      "cannot open '" + metadata_path(path) + "' for writing");
  }
  meta_os << meta.dump(2) << '\n';
}

}  // namespace secgame
