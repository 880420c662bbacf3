#pragma once

#include <cstdio>
#include <string>

namespace graphled {

// Shortest round-trippable-enough text for reports (10 significant digits).
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace graphled
