#pragma once

namespace proxres {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace proxres
