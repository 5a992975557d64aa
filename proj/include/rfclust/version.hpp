#pragma once

namespace rfclust {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rfclust
