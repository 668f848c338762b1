#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rnncover {

/// Shortest round-trip decimal form of a double (%.17g, C locale).
std::string fmt_double(double v);

/// "# config_hash=<16 hex digits> seed=<decimal>\n" comment line that
/// opens every output file.
std::string csv_comment_line(std::uint64_t config_hash, std::uint64_t seed);

/// Splits on a separator, trimming ASCII whitespace from each field.
std::vector<std::string> split_fields(const std::string& line, char sep);

double parse_double(const std::string& s);
std::uint64_t parse_uint(const std::string& s);

/// Writes text verbatim (binary mode, so "\n" stays "\n").
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace rnncover
