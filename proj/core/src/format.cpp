#include "qlocal/format.hpp"

#include <cmath>
#include <cstdio>

namespace qlocal {

std::string format_g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace qlocal
