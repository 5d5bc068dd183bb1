#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace lanesim {

// Shortest decimal representation that parses back to exactly the same
// double (tries 15, 16, then 17 significant digits).
inline std::string format_double_exact(double v) {
  char buf[64];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace lanesim
