#pragma once

// Small CSV helpers shared by the readers and writers.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace vartopic::text {

/// Splits one CSV record. Handles RFC 4180 double-quote escaping within the line.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_number);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(std::string_view value);

/// Shortest representation that round-trips.
std::string format_double(double value);

/// Parses a whole-string double; ParseError naming the line otherwise.
double parse_double(std::string_view text, std::size_t line_number);

/// Reads a line, dropping a trailing '\r'. False at end of stream.
bool read_line(std::istream& in, std::string& line);

} // namespace vartopic::text
