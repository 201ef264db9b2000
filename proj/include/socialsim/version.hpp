#pragma once

namespace socialsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace socialsim
