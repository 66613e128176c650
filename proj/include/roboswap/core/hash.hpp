#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace roboswap {

// FNV-1a, used for architecture hashes, config hashes and weight digests.
inline uint64_t fnv1a(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t fnv1a(const std::string& s, uint64_t seed = 0xcbf29ce484222325ULL) {
  return fnv1a(s.data(), s.size(), seed);
}

inline uint64_t fnv1a(const std::vector<float>& v, uint64_t seed = 0xcbf29ce484222325ULL) {
  return fnv1a(v.data(), v.size() * sizeof(float), seed);
}

inline std::string hash_hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace roboswap
