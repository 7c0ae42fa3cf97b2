#pragma once

#include <iosfwd>
#include <string>

#include "core/sample.hpp"

namespace dentropy {

inline constexpr const char* kSampleSchema = "dentropy.sample.v1";

/// Shortest text with 17 significant digits ("%.17g"); round-trips exactly.
std::string format_double(double v);

/// Header "# dist=<id> n=<n> seed=<s> dim=<d> schema=dentropy.sample.v1",
/// then one row per draw with space-separated columns.
void write_sample(std::ostream& out, const Sample& sample);
void write_sample_file(const std::string& path, const Sample& sample);

/// Reads the format above. The header is optional; without it the column
/// count of the first data row fixes the dimension. Blank lines and further
/// '#' lines are skipped. Malformed rows raise ParseError with the line number.
Sample read_sample(std::istream& in);
Sample read_sample_file(const std::string& path);

}  // namespace dentropy
