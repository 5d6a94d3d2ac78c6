#pragma once

namespace liouville {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace liouville
