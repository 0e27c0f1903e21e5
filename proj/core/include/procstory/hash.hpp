#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace procstory {

/// FNV-1a, 64 bit. Stable across platforms and runs; used for token
/// hashing, cache keys, and schema fingerprints.
constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t seed = 14695981039346656037ull) {
  std::uint64_t h = seed;
  for (char c : data) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

}  // namespace procstory
