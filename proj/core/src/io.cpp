#include "ssgp/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include "ssgp/errors.hpp"

namespace ssgp {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv_table(std::ostream& out, const std::string& schema, const CsvMeta& meta,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  out << "# schema=" << schema << '\n';
  for (const auto& [key, value] : meta) out << "# " << key << '=' << value << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw DomainError("CSV row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

void write_variation_csv(std::ostream& out, const VariationResult& result) {
  std::vector<std::vector<double>> rows;
  rows.reserve(result.times.size());
  for (std::size_t i = 0; i < result.times.size(); ++i)
    rows.push_back({result.times[i], result.values[i]});
  write_csv_table(out, "ssgp.variation/1",
                  {{"q", std::to_string(result.q)},
                   {"n", std::to_string(result.n)},
                   {"horizon", format_double(result.horizon)}},
                  {"t", "F_n"}, rows);
}

void write_json_file(const std::filesystem::path& file, const Json& doc) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ResourceError("cannot open " + file.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw ResourceError("write to " + file.string() + " failed");
}

Json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DomainError("cannot open " + file.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("invalid JSON in " + file.string() + ": " + e.what());
  }
}

void ensure_directory(const std::filesystem::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ResourceError("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace ssgp
