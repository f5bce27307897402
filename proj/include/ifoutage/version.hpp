#pragma once

namespace ifoutage {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ifoutage
