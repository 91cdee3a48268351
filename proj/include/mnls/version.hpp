#pragma once

namespace mnls {

// Embedded in every report and dump so runs stay traceable to a build.
inline constexpr const char* kVersion = "0.1.0";

} // namespace mnls
