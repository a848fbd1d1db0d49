#pragma once

namespace linkcalc {

inline constexpr const char* kVersion = "0.1.0";

} // namespace linkcalc
