#pragma once

namespace phash {

inline constexpr const char* kToolName = "phash";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace phash
