#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace csfb {

// Counter-based generator (Philox4x32, 10 rounds). A generator is identified
// by (master_seed, stream_id); distinct stream ids give independent sequences,
// which lets Monte Carlo trials run in any order or in parallel while
// producing identical draws.
class Rng {
 public:
  Rng(std::uint64_t master_seed, std::uint64_t stream_id)
      : key_{static_cast<std::uint32_t>(master_seed),
             static_cast<std::uint32_t>(master_seed >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(stream_id),
             static_cast<std::uint32_t>(stream_id >> 32)},
        pos_(4) {}

  std::uint64_t master_seed() const {
    return key_[0] | (static_cast<std::uint64_t>(key_[1]) << 32);
  }
  std::uint64_t stream_id() const {
    return ctr_[2] | (static_cast<std::uint64_t>(ctr_[3]) << 32);
  }

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  // uniform on [0,1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on (0,1], safe as a log() argument
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // unbiased integer in [0, bound), bound >= 1
  std::uint32_t below(std::uint32_t bound) {
    const std::uint32_t limit = UINT32_MAX - UINT32_MAX % bound;
    std::uint32_t v;
    do {
      v = next_u32();
    } while (v >= limit);
    return v % bound;
  }

  // standard normal via Box-Muller; second member of each pair is cached
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.283185307179586476925286766559 * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

  // CN(0,1): real and imaginary parts N(0, 1/2)
  std::complex<double> cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * kSqrtHalf, im * kSqrtHalf};
  }

 private:
  static constexpr double kSqrtHalf = 0.70710678118654752440;

  static void round(std::array<std::uint32_t, 4>& x, std::uint32_t k0,
                    std::uint32_t k1) {
    const std::uint64_t p0 = 0xD2511F53ULL * x[0];
    const std::uint64_t p1 = 0xCD9E8D57ULL * x[2];
    x = {static_cast<std::uint32_t>(p1 >> 32) ^ x[1] ^ k0,
         static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ x[3] ^ k1,
         static_cast<std::uint32_t>(p0)};
  }

  void refill() {
    std::array<std::uint32_t, 4> x = ctr_;
    std::uint32_t k0 = key_[0];
    std::uint32_t k1 = key_[1];
    for (int r = 0; r < 10; ++r) {
      round(x, k0, k1);
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buf_ = x;
    pos_ = 0;
    if (++ctr_[0] == 0) ++ctr_[1];  // 64-bit block counter, stream id untouched
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int pos_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace csfb
