#pragma once

namespace sqpt {
inline constexpr const char* kToolName = "choi-sqpt";
inline constexpr const char* kVersion = "0.1.0";
} // namespace sqpt
