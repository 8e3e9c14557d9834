#pragma once

namespace aqec {

inline constexpr const char* kVersion = "0.1.0";

}
