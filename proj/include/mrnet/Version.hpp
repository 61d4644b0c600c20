#pragma once

namespace mrnet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mrnet
