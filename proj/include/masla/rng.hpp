#pragma once

#include <cstdint>
#include <cmath>

#include "masla/common.hpp"

namespace masla {

// Identifies one random stream. Streams with distinct ids are distinct keyed
// Philox permutations, so they never overlap regardless of how many numbers
// each consumes.
struct StreamId {
  std::uint64_t hi = 0;  // master seed
  std::uint64_t lo = 0;  // chain / sub-stream index
};

// Per-chain stream for chain `index` of an ensemble seeded with `master`.
inline StreamId derive_stream(std::uint64_t master, std::uint64_t index) {
  return StreamId{master, index};
}

// Counter-based generator: Philox-4x64 with 10 rounds. The key is the
// 128-bit StreamId, the counter enumerates blocks of four 64-bit words.
class Rng {
 public:
  explicit Rng(StreamId id) : key0_(id.hi), key1_(id.lo) {}
  Rng(std::uint64_t master, std::uint64_t index) : key0_(master), key1_(index) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    ++draws_;
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (cosine branch). Consumes exactly two
  // 64-bit words per call; no cached second variate, so the stream layout
  // is a fixed function of the call sequence.
  double normal() {
    ++draws_;
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;        // [0,1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  void fill_normal(Vec& out) {
    for (double& v : out) v = normal();
  }

  // Number of variates handed out (uniform and normal calls both count one).
  std::uint64_t draw_count() const { return draws_; }

  std::uint64_t next_u64() {
    if (have_ == 0) {
      refill();
      have_ = 4;
    }
    return out_[4 - have_--];
  }

 private:
  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }

  void refill() {
    std::uint64_t c0 = ctr0_, c1 = ctr1_, c2 = ctr2_, c3 = ctr3_;
    std::uint64_t k0 = key0_, k1 = key1_;
    for (int r = 0; r < 10; ++r) {
      std::uint64_t hi0, lo0, hi1, lo1;
      mulhilo(0xD2E7470EE14C6C93ULL, c0, hi0, lo0);
      mulhilo(0xCA5A826395121157ULL, c2, hi1, lo1);
      c0 = hi1 ^ c1 ^ k0;
      c1 = lo1;
      c2 = hi0 ^ c3 ^ k1;
      c3 = lo0;
      k0 += 0x9E3779B97F4A7C15ULL;
      k1 += 0xBB67AE8584CAA73BULL;
    }
    out_[0] = c0;
    out_[1] = c1;
    out_[2] = c2;
    out_[3] = c3;
    if (++ctr0_ == 0 && ++ctr1_ == 0 && ++ctr2_ == 0) ++ctr3_;
  }

  std::uint64_t key0_, key1_;
  std::uint64_t ctr0_ = 0, ctr1_ = 0, ctr2_ = 0, ctr3_ = 0;
  std::uint64_t out_[4] = {0, 0, 0, 0};
  int have_ = 0;
  std::uint64_t draws_ = 0;
};

// SplitMix64 finalizer; used to spawn auxiliary stream ids (reference runs,
// subsampling) that must not collide with chain streams.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace masla
