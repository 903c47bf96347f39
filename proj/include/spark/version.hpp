#pragma once

namespace spark {

inline constexpr const char* kToolName = "spark";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace spark
