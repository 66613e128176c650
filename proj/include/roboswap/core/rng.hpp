#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include "roboswap/core/error.hpp"

namespace roboswap {

inline uint64_t splitmix64_next(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Mix a base seed with up to two stream identifiers. Every component that
// needs randomness derives its own stream so call order never matters.
inline uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b = 0) {
  uint64_t s = base;
  uint64_t h = splitmix64_next(s);
  s ^= a * 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64_next(s);
  s ^= b * 0xc2b2ae3d27d4eb4fULL;
  h ^= splitmix64_next(s);
  return h;
}

// xoshiro256** with hand-rolled uniform/normal draws. Avoids the standard
// library distributions so sequences are identical on every platform and the
// full state serializes to a short hex string.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) { reseed(seed); }

  void reseed(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64_next(sm);
    has_gauss_ = false;
    gauss_ = 0.0;
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inclusive integer range, rejection sampled (no modulo bias).
  int64_t uniform_int(int64_t lo, int64_t hi) {
    if (hi < lo) throw InvalidArgument("uniform_int: empty range");
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<int64_t>(next_u64());  // full 64-bit range
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t r;
    do {
      r = next_u64();
    } while (r >= limit);
    return lo + static_cast<int64_t>(r % span);
  }

  // Standard normal via Box-Muller; caches the second draw.
  double normal() {
    if (has_gauss_) {
      has_gauss_ = false;
      return gauss_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    gauss_ = r * std::sin(theta);
    has_gauss_ = true;
    return r * std::cos(theta);
  }

  std::string state() const {
    std::ostringstream os;
    os << std::hex;
    for (auto w : s_) os << w << ":";
    os << (has_gauss_ ? 1 : 0) << ":" << std::hexfloat << gauss_;
    return os.str();
  }

  void restore(const std::string& text) {
    std::istringstream is(text);
    std::string tok;
    std::array<uint64_t, 4> s{};
    for (auto& w : s) {
      if (!std::getline(is, tok, ':')) throw InvalidArgument("Rng::restore: bad state string");
      w = std::stoull(tok, nullptr, 16);
    }
    if (!std::getline(is, tok, ':')) throw InvalidArgument("Rng::restore: bad state string");
    const bool has = tok == "1";
    if (!std::getline(is, tok, ':')) throw InvalidArgument("Rng::restore: bad state string");
    s_ = s;
    has_gauss_ = has;
    gauss_ = std::strtod(tok.c_str(), nullptr);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<uint64_t, 4> s_{};
  bool has_gauss_ = false;
  double gauss_ = 0.0;
};

}  // namespace roboswap
