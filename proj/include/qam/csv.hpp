#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qam/errors.hpp"
#include "qam/format.hpp"
#include "qam/weighted_sample.hpp"

namespace qam {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& field, int line_no) {
  const std::string t = trim(field);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw InputError("line " + std::to_string(line_no) +
                     ": cannot parse number from \"" + field + "\"");
  }
  return out;
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace detail

/// Rows of "value,weight" (or just "value" for uniform weights) under the
/// matching header line.
inline WeightedSample read_sample_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty sample CSV");
  const std::string header = detail::trim(line);
  bool has_weights = false;
  if (header == "value,weight") {
    has_weights = true;
  } else if (header != "value") {
    throw InputError("sample CSV header must be \"value,weight\" or \"value\", got \"" +
                     header + "\"");
  }

  std::vector<double> values;
  std::vector<double> weights;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_fields(line);
    const std::size_t want = has_weights ? 2u : 1u;
    if (fields.size() != want) {
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(want) + " fields, got " +
                       std::to_string(fields.size()));
    }
    values.push_back(detail::parse_double(fields[0], line_no));
    if (has_weights) weights.push_back(detail::parse_double(fields[1], line_no));
  }
  if (values.empty()) throw InputError("sample CSV has a header but no rows");
  if (has_weights) return WeightedSample(std::move(values), std::move(weights));
  return WeightedSample(std::move(values));
}

inline WeightedSample read_sample_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open sample CSV \"" + path + "\"");
  return read_sample_csv(in);
}

inline void write_sweep_csv(std::ostream& out,
                            const std::vector<std::pair<double, double>>& rows) {
  out << "beta,mean\n";
  for (const auto& [beta, mean] : rows) {
    out << format_number(beta) << "," << format_number(mean) << "\n";
  }
}

inline std::vector<std::pair<double, double>> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "beta,mean") {
    throw InputError("sweep CSV header must be \"beta,mean\"");
  }
  std::vector<std::pair<double, double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_fields(line);
    if (fields.size() != 2) {
      throw InputError("line " + std::to_string(line_no) +
                       ": expected 2 fields, got " +
                       std::to_string(fields.size()));
    }
    rows.emplace_back(detail::parse_double(fields[0], line_no),
                      detail::parse_double(fields[1], line_no));
  }
  return rows;
}

}  // namespace qam
