#pragma once

namespace spamtk {

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace spamtk
