#pragma once

#include <array>
#include <cstdint>

namespace rsa {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A pure function of (counter, key); there is no hidden state, so any block
/// of any stream can be produced independently and in any order.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr int kRounds = 10;

  static constexpr Counter generate(Counter ctr, Key key) {
    for (int r = 0; r < kRounds; ++r) {
      if (r > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      ctr = round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Counter round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// Uniform double in [0,1) from the top 53 bits of a 64-bit word.
constexpr double to_unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Independent stream keyed by (seed, stream id). Element i of the stream is
/// fixed for ever: block i/2 of the counter (i/2, stream), half i%2.
class ReplicaStream {
 public:
  ReplicaStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  /// Fills out[0..count) with uniforms for elements first .. first+count-1.
  template <typename OutIt>
  void fill_uniform(std::uint64_t first, std::uint64_t count, OutIt out) const {
    std::uint64_t i = first;
    const std::uint64_t end = first + count;
    while (i < end) {
      const std::uint64_t block = i / 2;
      const auto r = Philox4x32::generate(
          {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
           static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
          key_);
      const double u[2] = {to_unit_double((std::uint64_t{r[1]} << 32) | r[0]),
                           to_unit_double((std::uint64_t{r[3]} << 32) | r[2])};
      for (std::uint64_t half = i % 2; half < 2 && i < end; ++half, ++i) *out++ = u[half];
    }
  }

 private:
  Philox4x32::Key key_;
  std::uint64_t stream_;
};

}  // namespace rsa
