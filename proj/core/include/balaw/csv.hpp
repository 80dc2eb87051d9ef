#pragma once

#include <charconv>
#include <span>
#include <string>
#include <system_error>

namespace balaw {

/// Shortest representation that parses back to the same double; the
/// deterministic number format used by every CSV artifact.
inline std::string format_double(double value) {
  char buffer[64];
  const std::to_chars_result result =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (result.ec != std::errc{}) return "nan";
  return std::string(buffer, result.ptr);
}

/// RFC 4180 quoting: fields containing commas, quotes, or line breaks are
/// wrapped in double quotes with embedded quotes doubled.
inline std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

inline std::string csv_row(std::span<const std::string> fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) row += ',';
    row += csv_field(fields[i]);
  }
  row += '\n';
  return row;
}

}  // namespace balaw
