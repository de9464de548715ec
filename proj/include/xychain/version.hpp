#pragma once

namespace xychain {

inline constexpr const char* version = "0.1.0";

}  // namespace xychain
