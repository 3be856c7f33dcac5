#pragma once

namespace nlapprox {

inline constexpr const char* kToolName = "nlapprox";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace nlapprox
