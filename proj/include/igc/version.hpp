#pragma once

namespace igc {

inline constexpr const char* kToolName = "igcx";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace igc
