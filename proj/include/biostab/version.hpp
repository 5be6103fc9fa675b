#pragma once

namespace biostab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace biostab
