#include "rsa/lattice.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rsa {

ArrivalField::ArrivalField(std::vector<double> times, Boundary boundary)
    : times_(std::move(times)), boundary_(boundary) {
  if (times_.empty()) throw std::invalid_argument("arrival field needs at least one site");
  if (boundary_ == Boundary::ring && times_.size() < 3)
    throw std::invalid_argument("ring lattice needs at least 3 sites");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    const double v = times_[i];
    if (std::isnan(v)) throw std::invalid_argument("NaN arrival time at site " + std::to_string(i));
    if (v < 0.0 || v > 1.0)
      throw std::invalid_argument("arrival time outside [0,1] at site " + std::to_string(i));
  }
}

Occupancy::Occupancy(std::size_t sites, Boundary boundary, double threshold)
    : sites_(sites),
      boundary_(boundary),
      threshold_(threshold),
      words_((sites + kWordBits - 1) / kWordBits, 0) {}

std::size_t Occupancy::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::uint64_t Occupancy::read_ring(std::size_t pos) const {
  std::uint64_t out = 0;
  std::size_t filled = 0;
  pos %= sites_;
  while (filled < kWordBits) {
    const std::size_t word = pos / kWordBits;
    const std::size_t bit = pos % kWordBits;
    // Bits available in this word before either the word end or the lattice end.
    std::size_t avail = kWordBits - bit;
    if (avail > sites_ - pos) avail = sites_ - pos;
    if (avail > kWordBits - filled) avail = kWordBits - filled;
    std::uint64_t chunk = words_[word] >> bit;
    if (avail < kWordBits) chunk &= (std::uint64_t{1} << avail) - 1;
    out |= chunk << filled;
    filled += avail;
    pos += avail;
    if (pos == sites_) pos = 0;
  }
  return out;
}

std::vector<std::uint64_t> Occupancy::shifted(std::ptrdiff_t offset) const {
  std::vector<std::uint64_t> out(words_.size(), 0);
  if (sites_ == 0) return out;
  const auto n = static_cast<std::ptrdiff_t>(sites_);

  if (boundary_ == Boundary::ring) {
    const auto start = static_cast<std::size_t>(((offset % n) + n) % n);
    for (std::size_t w = 0; w < out.size(); ++w) out[w] = read_ring(start + w * kWordBits);
  } else {
    for (std::size_t w = 0; w < out.size(); ++w) {
      std::uint64_t acc = 0;
      const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(w * kWordBits) + offset;
      const std::ptrdiff_t q = base >= 0 ? base / 64 : -((-base + 63) / 64);
      const auto r = static_cast<unsigned>(base - q * 64);
      auto word_at = [&](std::ptrdiff_t idx) -> std::uint64_t {
        return (idx >= 0 && idx < static_cast<std::ptrdiff_t>(words_.size())) ? words_[idx] : 0;
      };
      acc = word_at(q) >> r;
      if (r != 0) acc |= word_at(q + 1) << (64 - r);
      out[w] = acc;
    }
  }
  // Clear bits past the lattice end.
  if (const std::size_t tail = sites_ % kWordBits; tail != 0)
    out.back() &= (std::uint64_t{1} << tail) - 1;
  return out;
}

std::vector<std::uint64_t> Occupancy::range_mask(std::size_t lo, std::size_t hi) const {
  std::vector<std::uint64_t> out(words_.size(), 0);
  if (hi > sites_) hi = sites_;
  for (std::size_t i = lo; i < hi;) {
    const std::size_t bit = i % kWordBits;
    std::size_t len = kWordBits - bit;
    if (len > hi - i) len = hi - i;
    const std::uint64_t m = len == kWordBits ? ~std::uint64_t{0} : ((std::uint64_t{1} << len) - 1);
    out[i / kWordBits] |= m << bit;
    i += len;
  }
  return out;
}

std::size_t Occupancy::adjacent_pairs() const {
  const auto next = shifted(1);
  std::size_t n = 0;
  for (std::size_t w = 0; w < words_.size(); ++w)
    n += static_cast<std::size_t>(std::popcount(words_[w] & next[w]));
  return n;
}

std::vector<std::uint8_t> Occupancy::to_bytes() const {
  std::vector<std::uint8_t> out(sites_);
  for (std::size_t i = 0; i < sites_; ++i) out[i] = test(i) ? 1 : 0;
  return out;
}

}  // namespace rsa
