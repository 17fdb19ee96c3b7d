#pragma once

#include <cstdio>
#include <string>

namespace qam {

/// Number formatting shared by the CLI and diagnostics: 12 significant
/// digits, "." decimal separator (the process never leaves the "C" locale).
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace qam
