#pragma once

namespace usfda {
inline constexpr const char* kVersion = "0.1.0";
}
