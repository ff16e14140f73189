#pragma once

namespace latentprobe {

inline constexpr const char* kToolName = "latentprobe";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace latentprobe
