#pragma once

#include <cstdio>
#include <string>

namespace novelty {

/// Fixed 12-significant-digit rendering used for all human-readable numeric
/// output; byte-identical across runs and platforms for the same value.
inline std::string format_g12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace novelty
