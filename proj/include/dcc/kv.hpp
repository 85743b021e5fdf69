#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dcc {

/// `key = value` lines; blank lines and lines starting with '#' are skipped.
/// Keys may repeat; order is preserved.
std::vector<std::pair<std::string, std::string>> read_key_values(std::istream &in);

std::vector<std::string> split(const std::string &s, char sep);

}  // namespace dcc
