#pragma once

namespace pxp {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pxp
