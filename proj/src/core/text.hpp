#pragma once

#include <charconv>
#include <string>

namespace fkm {

/// Shortest round-trip decimal rendering of a double.
inline std::string formatDouble(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace fkm
