#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace ardl {

/// FNV-1a 64-bit content hash. Not cryptographic; used to fingerprint
/// configs and artifacts in run manifests.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

}  // namespace ardl
