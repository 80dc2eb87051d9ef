#pragma once

namespace balaw {

/// Version of the scenario-config and report schemas accepted by this build.
inline constexpr int kSchemaVersion = 1;

inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace balaw
