#pragma once

#include <charconv>
#include <string>

namespace plasmon {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // print -0 as 0
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace plasmon
