#pragma once

namespace secgame {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace secgame
