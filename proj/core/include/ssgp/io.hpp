#pragma once
// File formats: CSV tables with '#'-prefixed metadata and JSON reports.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ssgp/variations.hpp"

namespace ssgp {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

/// Metadata lines written as "# key=value" ahead of the header row.
using CsvMeta = std::vector<std::pair<std::string, std::string>>;

/// Writes "# schema=<schema>", the metadata lines, the header and the rows.
/// Numbers are written in the shortest form that reads back exactly.
void write_csv_table(std::ostream& out, const std::string& schema, const CsvMeta& meta,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

/// Two columns t, F_n(t).
void write_variation_csv(std::ostream& out, const VariationResult& result);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

/// Pretty-printed JSON with a trailing newline.
void write_json_file(const std::filesystem::path& file, const Json& doc);
Json read_json_file(const std::filesystem::path& file);

/// Creates the directory (and parents) when missing.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace ssgp
