#pragma once

namespace loscap {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace loscap
