#pragma once

namespace dacspec {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dacspec
