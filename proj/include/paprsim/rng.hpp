#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace paprsim {

/// SplitMix64 finalizer. This is the single mixing step behind every derived
/// seed in the project; see seed_stream() in harness.hpp.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic random source. std::mt19937_64 keeps the raw 64-bit stream
/// bit-stable across platforms; the draws below avoid std::uniform_* /
/// std::bernoulli_distribution, whose outputs are implementation-defined.
///
/// Draw conventions (fixed for reproducibility):
///  - uniform(): (next_u64() >> 11) * 2^-53, uniform on [0, 1)
///  - bernoulli(p): uniform() < p
///  - below(n): (next_u64() * n) >> 64 via 128-bit multiply
///  - bits(k): k words are consumed 64 bits at a time, least significant first
///  - shuffle: Fisher-Yates from the last element down, j = below(i + 1)
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  uint64_t below(uint64_t bound) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  /// Fills `out` with n_bits values in {0,1}.
  void bits(std::vector<uint8_t>& out, size_t n_bits) {
    out.resize(n_bits);
    uint64_t word = 0;
    for (size_t i = 0; i < n_bits; ++i) {
      if (i % 64 == 0) word = next_u64();
      out[i] = static_cast<uint8_t>((word >> (i % 64)) & 1u);
    }
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace paprsim
