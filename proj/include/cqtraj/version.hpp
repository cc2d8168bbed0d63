#pragma once

namespace cqtraj {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cqtraj
