#pragma once

#include <string>

namespace nlh {

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

}  // namespace nlh
