#pragma once

#include <string>

namespace qlocal {

// Shortest exact decimal form used everywhere numbers are serialized, so that
// repeated runs produce byte-identical files.
std::string format_g17(double v);

}  // namespace qlocal
