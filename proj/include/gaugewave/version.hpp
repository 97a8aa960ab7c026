#pragma once

namespace gw {
inline constexpr const char* kToolVersion = "1.0.0";
}
