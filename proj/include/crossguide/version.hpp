#pragma once

namespace crossguide {
inline constexpr const char* kVersion = "0.1.0";
}
