#pragma once

namespace stagesim {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace stagesim
