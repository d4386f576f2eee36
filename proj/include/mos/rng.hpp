#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace mos {

// Deterministic, platform-independent randomness. Every consumer draws
// from its own named stream derived from the scenario seed, keyed by a
// time index where replay-by-step matters, so enabling or disabling one
// consumer never perturbs another.

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t mix64(uint64_t a, uint64_t b) {
  uint64_t s = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  return splitmix64(s);
}

constexpr uint64_t stream_tag(std::string_view name) {
  uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : name) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Prng {
 public:
  explicit Prng(uint64_t seed) : state_(seed) {}
  Prng(std::initializer_list<uint64_t> key_parts) : state_(0x853c49e6748fea9bULL) {
    for (uint64_t p : key_parts) state_ = mix64(state_, p);
  }

  uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1].
  double uniform01_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  uint64_t below(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  bool bernoulli(double p) { return uniform01() < p; }

  double normal(double mean = 0.0, double sd = 1.0) {
    // Box-Muller, one draw per pair; keeps the stream stateless per call site.
    const double u1 = uniform01_pos();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  uint64_t state_;
};

// Single keyed draws for consumers that must be a pure function of
// (seed, stream, step, index).
inline double keyed_uniform01(uint64_t seed, uint64_t stream, uint64_t step, uint64_t index) {
  Prng p{seed, stream, step, index};
  return p.uniform01();
}

inline double keyed_normal(uint64_t seed, uint64_t stream, uint64_t step, uint64_t index,
                           double mean, double sd) {
  Prng p{seed, stream, step, index};
  return p.normal(mean, sd);
}

}  // namespace mos
