#pragma once

namespace ardl {

inline constexpr const char* kVersion = "0.1.0";

// Version of the on-disk artifact schemas (manifest, stage JSON, report CSVs).
// Bump whenever a field is added, removed, or renamed.
inline constexpr int kArtifactSchemaVersion = 1;

}  // namespace ardl
