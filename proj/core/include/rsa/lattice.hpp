#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rsa {

enum class Boundary { free, ring };

/// Deposition attempt times t_s in [0,1], one per site of a finite lattice.
class ArrivalField {
 public:
  // Throws std::invalid_argument on NaN or out-of-range times, an empty field,
  // or a ring shorter than 3 sites.
  ArrivalField(std::vector<double> times, Boundary boundary);

  std::span<const double> times() const { return times_; }
  double operator[](std::size_t i) const { return times_[i]; }
  std::size_t size() const { return times_.size(); }
  Boundary boundary() const { return boundary_; }

 private:
  std::vector<double> times_;
  Boundary boundary_;
};

/// Configuration omega(T, t): one bit per site, packed into 64-bit words.
/// Bits past size() in the last word are always zero.
class Occupancy {
 public:
  static constexpr std::size_t kWordBits = 64;

  Occupancy() = default;
  Occupancy(std::size_t sites, Boundary boundary, double threshold);

  std::size_t size() const { return sites_; }
  Boundary boundary() const { return boundary_; }
  double threshold() const { return threshold_; }

  bool test(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1u; }
  void set(std::size_t i) { words_[i / kWordBits] |= std::uint64_t{1} << (i % kWordBits); }

  std::size_t count() const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  /// Bit i of the result is bit (i + offset) of this configuration; positions
  /// that fall off a free lattice read as zero, ring positions wrap.
  std::vector<std::uint64_t> shifted(std::ptrdiff_t offset) const;

  /// Mask with bits set exactly for sites in [lo, hi).
  std::vector<std::uint64_t> range_mask(std::size_t lo, std::size_t hi) const;

  /// Number of adjacent occupied pairs (wrapping in ring mode).
  std::size_t adjacent_pairs() const;

  std::vector<std::uint8_t> to_bytes() const;

  friend bool operator==(const Occupancy& a, const Occupancy& b) {
    return a.sites_ == b.sites_ && a.words_ == b.words_;
  }

 private:
  // 64 bits starting at (possibly wrapped) position pos; ring mode only.
  std::uint64_t read_ring(std::size_t pos) const;

  std::size_t sites_ = 0;
  Boundary boundary_ = Boundary::free;
  double threshold_ = 0.0;
  std::vector<std::uint64_t> words_;
};

}  // namespace rsa
