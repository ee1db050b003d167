#pragma once

#include "treecast/channels.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace treecast {

/// One `key = value` line of a sectioned text file.
struct IniEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

/// Parses `[section]` headers and `key = value` lines; `#` starts a comment.
/// Throws ParseError on anything else.
std::vector<IniEntry> parse_ini(std::istream& in);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

/// %.17g, with "inf" / "-inf" / "nan" spelled out.
std::string format_double(double x);
double parse_double(const std::string& s);
long long parse_int(const std::string& s);

/// Rows separated by ';', entries by ','.
std::string format_matrix(const Matrix& m);
Matrix parse_matrix(const std::string& s);
std::string format_vector(const Vector& v);
Vector parse_vector(const std::string& s);
std::string format_ints(const std::vector<int>& xs);
std::vector<int> parse_ints(const std::string& s);

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t x);
/// Hash of a matrix through its 17-digit text form.
std::string matrix_hash(const Matrix& m);

}  // namespace treecast
