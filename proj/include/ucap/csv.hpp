#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ucap::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // source line of each row, 1-based
};

// Reads a comma-separated table with a header line. Blank lines and lines
// starting with '#' are skipped; fields are trimmed. No quoting support.
Table read(std::istream& in);

std::string trim(std::string_view s);

// Parses a finite double; returns false on garbage or trailing characters.
bool parse_double(std::string_view text, double& value);

// Shortest representation that round-trips.
std::string format_double(double value);

}  // namespace ucap::csv
