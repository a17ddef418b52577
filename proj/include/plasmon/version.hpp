#pragma once

namespace plasmon {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace plasmon
