#pragma once

namespace driftls {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace driftls
