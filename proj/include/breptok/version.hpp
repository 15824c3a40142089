#pragma once

namespace breptok {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace breptok
