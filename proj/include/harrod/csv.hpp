#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "harrod/domain.hpp"
#include "harrod/format.hpp"

namespace harrod {

inline constexpr std::string_view kTrajectoryCsvHeader =
    "tau,K,I,Y,C,Y_R,K_R,C_R";

/// Trajectory as CSV text with the fixed header and 12-significant-digit
/// scientific values. Identical trajectories produce byte-identical output.
inline std::string trajectory_csv(const Trajectory& t) {
  std::string out{kTrajectoryCsvHeader};
  out += '\n';
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    out += format_sci(t.grid[i]);
    out += ',';
    out += format_sci(t.capital[i]);
    out += ',';
    out += format_sci(t.investment[i]);
    out += ',';
    out += format_sci(t.income[i]);
    out += ',';
    out += format_sci(t.consumption[i]);
    out += ',';
    out += format_sci(t.realized_income[i]);
    out += ',';
    out += format_sci(t.realized_capital[i]);
    out += ',';
    out += format_sci(t.realized_consumption[i]);
    out += '\n';
  }
  return out;
}

/// Parses CSV produced by trajectory_csv. The realized-investment series is
/// restored from the K_R column (the two integrate the same intensity).
inline Trajectory parse_trajectory_csv(std::string_view text) {
  Trajectory t;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kTrajectoryCsvHeader)
        throw parse_error(line_no, "unexpected CSV header: " + line);
      continue;
    }
    const auto fields = detail::split(line, ',');
    if (fields.size() != 8)
      throw parse_error(line_no, "expected 8 CSV fields");
    t.grid.push_back(detail::parse_number(fields[0], line_no, "tau"));
    t.capital.push_back(detail::parse_number(fields[1], line_no, "K"));
    t.investment.push_back(detail::parse_number(fields[2], line_no, "I"));
    t.income.push_back(detail::parse_number(fields[3], line_no, "Y"));
    t.consumption.push_back(detail::parse_number(fields[4], line_no, "C"));
    t.realized_income.push_back(detail::parse_number(fields[5], line_no, "Y_R"));
    t.realized_capital.push_back(detail::parse_number(fields[6], line_no, "K_R"));
    t.realized_consumption.push_back(
        detail::parse_number(fields[7], line_no, "C_R"));
  }
  t.realized_investment = t.realized_capital;
  return t;
}

/// Observation input: header `tau,value`, one sample per row.
inline std::vector<std::pair<double, double>> parse_observations_csv(
    std::string_view text) {
  std::vector<std::pair<double, double>> samples;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "tau,value")
        throw parse_error(line_no, "expected header 'tau,value'");
      continue;
    }
    const auto fields = detail::split(line, ',');
    if (fields.size() != 2)
      throw parse_error(line_no, "expected 'tau,value' rows");
    samples.emplace_back(detail::parse_number(fields[0], line_no, "tau"),
                         detail::parse_number(fields[1], line_no, "value"));
  }
  return samples;
}

}  // namespace harrod
