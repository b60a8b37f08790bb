#pragma once

namespace fsvm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fsvm
