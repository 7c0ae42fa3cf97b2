#include "core/sample_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "core/error.hpp"

namespace dentropy {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits on spaces, tabs and commas.
std::vector<std::string_view> fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_number(std::string_view s, double& v) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

template <typename T>
bool parse_integer(std::string_view s, T& v) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Applies "key=value" tokens of the header line to the sample being read.
void apply_header(std::string_view line, std::size_t line_no, Sample& s, std::size_t& declared_n,
                  bool& has_dim) {
  for (std::string_view tok : fields(line.substr(1))) {
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string_view key = tok.substr(0, eq);
    const std::string_view value = tok.substr(eq + 1);
    bool ok = true;
    if (key == "dist") {
      try {
        s.distribution = parse_distribution(value);
      } catch (const InvalidArgument&) {
        ok = false;
      }
    } else if (key == "n") {
      ok = parse_integer(value, declared_n);
    } else if (key == "seed") {
      ok = parse_integer(value, s.seed);
    } else if (key == "dim") {
      ok = parse_integer(value, s.dim) && s.dim >= 1;
      has_dim = ok;
    }
    if (!ok)
      throw ParseError("line " + std::to_string(line_no) + ": bad header value '" +
                           std::string(tok) + "'",
                       line_no);
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_sample(std::ostream& out, const Sample& sample) {
  out << "# dist=" << (sample.distribution ? to_string(*sample.distribution) : "unknown")
      << " n=" << sample.n << " seed=" << sample.seed << " dim=" << sample.dim
      << " schema=" << kSampleSchema << '\n';
  std::string line;
  for (std::size_t i = 0; i < sample.n; ++i) {
    line.clear();
    for (int j = 0; j < sample.dim; ++j) {
      if (j > 0) line += ' ';
      line += format_double(sample.at(i, j));
    }
    line += '\n';
    out << line;
  }
}

void write_sample_file(const std::string& path, const Sample& sample) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing", path);
  write_sample(out, sample);
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'", path);
}

Sample read_sample(std::istream& in) {
  Sample s;
  s.dim = 0;
  bool has_dim = false;
  bool seen_data = false;
  std::size_t declared_n = 0;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!seen_data) apply_header(line, line_no, s, declared_n, has_dim);
      continue;
    }
    const auto cols = fields(line);
    if (s.dim == 0) s.dim = static_cast<int>(cols.size());
    if (cols.size() != static_cast<std::size_t>(s.dim))
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(s.dim) +
                           " columns, found " + std::to_string(cols.size()),
                       line_no);
    for (std::string_view c : cols) {
      double v;
      if (!parse_number(c, v) || !std::isfinite(v))
        throw ParseError("line " + std::to_string(line_no) + ": not a finite number: '" +
                             std::string(c) + "'",
                         line_no);
      s.data.push_back(v);
    }
    ++s.n;
    seen_data = true;
  }
  if (s.n == 0) throw ParseError("no data rows", line_no);
  if (declared_n != 0 && declared_n != s.n)
    throw ParseError("header declares n=" + std::to_string(declared_n) + " but file has " +
                         std::to_string(s.n) + " rows",
                     line_no);
  return s;
}

Sample read_sample_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading", path);
  try {
    return read_sample(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

}  // namespace dentropy
