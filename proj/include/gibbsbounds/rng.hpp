#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

#include "gibbsbounds/geometry.hpp"

namespace gibbsbounds {

// Identifies one reproducible sample path; distinct streams under the same
// seed are independent substreams (replicates get stream = base + index).
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Philox 4x32-10 counter-based generator. The (seed, stream) pair keys the
// block cipher, so substreams never overlap and a sequence is fully
// determined by its seed regardless of thread layout.
class Rng {
 public:
  explicit Rng(RngSeed s)
      : key0_(static_cast<std::uint32_t>(s.seed)),
        key1_(static_cast<std::uint32_t>(s.seed >> 32)),
        stream_lo_(static_cast<std::uint32_t>(s.stream)),
        stream_hi_(static_cast<std::uint32_t>(s.stream >> 32)) {}

  std::uint64_t next_u64() {
    if (have_ == 0) refill();
    --have_;
    return buffer_[have_];
  }

  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double exponential(double rate = 1.0) { return -std::log1p(-uniform01()) / rate; }

  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Exact Poisson count via unit-exponential interarrivals.
  std::uint64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    std::uint64_t k = 0;
    double acc = exponential();
    while (acc <= mean) {
      ++k;
      acc += exponential();
    }
    return k;
  }

  void uniform_point(const Window& w, std::span<double> out) {
    for (int i = 0; i < w.dim(); ++i) out[i] = uniform(w.lower()[i], w.upper()[i]);
  }

 private:
  static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
  }

  void refill() {
    std::uint32_t x0 = static_cast<std::uint32_t>(block_);
    std::uint32_t x1 = static_cast<std::uint32_t>(block_ >> 32);
    std::uint32_t x2 = stream_lo_;
    std::uint32_t x3 = stream_hi_;
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      std::uint32_t hi0, lo0, hi1, lo1;
      mulhilo(0xD2511F53u, x0, hi0, lo0);
      mulhilo(0xCD9E8D57u, x2, hi1, lo1);
      const std::uint32_t y0 = hi1 ^ x1 ^ k0;
      const std::uint32_t y1 = lo1;
      const std::uint32_t y2 = hi0 ^ x3 ^ k1;
      const std::uint32_t y3 = lo0;
      x0 = y0;
      x1 = y1;
      x2 = y2;
      x3 = y3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buffer_[0] = (static_cast<std::uint64_t>(x0) << 32) | x1;
    buffer_[1] = (static_cast<std::uint64_t>(x2) << 32) | x3;
    have_ = 2;
    ++block_;
  }

  std::uint32_t key0_, key1_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int have_ = 0;
};

}  // namespace gibbsbounds
