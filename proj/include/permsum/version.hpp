#pragma once

namespace permsum {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace permsum
