#pragma once

namespace prefrec {

inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace prefrec
