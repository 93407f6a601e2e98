#pragma once

namespace otdr {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace otdr
