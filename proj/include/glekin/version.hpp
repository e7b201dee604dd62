#pragma once

namespace glekin {

inline constexpr const char* kVersion = "0.1.0";

} // namespace glekin
