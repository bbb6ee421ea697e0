#pragma once

namespace pfcs {
inline constexpr const char* kVersion = "0.1.0";
}
