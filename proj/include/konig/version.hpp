#pragma once

namespace konig {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace konig
