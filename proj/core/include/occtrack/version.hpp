#pragma once

namespace occtrack {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace occtrack
