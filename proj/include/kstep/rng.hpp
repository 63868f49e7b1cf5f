// Counter-based random number generation for reproducible parallel replicas.
//
// Philox4x64-10: a 10-round bijective mixing of a 256-bit counter under a
// 128-bit key.  We key each stream with (seed, stream) so replica r of an
// experiment draws from the non-overlapping stream (seed, r), and identical
// (seed, stream) always reproduce the same draws regardless of thread
// scheduling.

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace kstep {

class Philox {
 public:
  Philox(uint64_t seed, uint64_t stream) : key0_(seed), key1_(stream) {}

  static constexpr std::string_view algorithm() { return "philox4x64-10"; }

  uint64_t next_u64() {
    if (have_ == 0) refill();
    return buf_[--have_];
  }

  /// Uniform double in (0, 1]; safe under log().
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Exponential waiting time with the given total rate.
  double exponential(double rate) { return -std::log(next_double()) / rate; }

  /// Uniform index in [0, n) by 128-bit multiply-shift (bias < n * 2^-64).
  uint64_t uniform_index(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<__uint128_t>(next_u64()) * n) >> 64);
  }

  bool bernoulli(double prob) { return next_double() <= prob; }

 private:
  static constexpr uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  static void mulhilo(uint64_t a, uint64_t b, uint64_t& hi, uint64_t& lo) {
    const __uint128_t prod = static_cast<__uint128_t>(a) * b;
    hi = static_cast<uint64_t>(prod >> 64);
    lo = static_cast<uint64_t>(prod);
  }

  void refill() {
    uint64_t x0 = ctr_[0], x1 = ctr_[1], x2 = ctr_[2], x3 = ctr_[3];
    uint64_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      uint64_t hi0, lo0, hi1, lo1;
      mulhilo(kMul0, x0, hi0, lo0);
      mulhilo(kMul1, x2, hi1, lo1);
      const uint64_t y0 = hi1 ^ x1 ^ k0;
      const uint64_t y1 = lo1;
      const uint64_t y2 = hi0 ^ x3 ^ k1;
      const uint64_t y3 = lo0;
      x0 = y0;
      x1 = y1;
      x2 = y2;
      x3 = y3;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    buf_[0] = x0;
    buf_[1] = x1;
    buf_[2] = x2;
    buf_[3] = x3;
    have_ = 4;
    if (++ctr_[0] == 0 && ++ctr_[1] == 0 && ++ctr_[2] == 0) ++ctr_[3];
  }

  uint64_t key0_, key1_;
  uint64_t ctr_[4] = {0, 0, 0, 0};
  uint64_t buf_[4] = {0, 0, 0, 0};
  int have_ = 0;
};

}  // namespace kstep
