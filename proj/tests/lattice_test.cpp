#include "rsa/lattice.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

namespace {

using rsa::ArrivalField;
using rsa::Boundary;
using rsa::Occupancy;

Occupancy random_occupancy(std::size_t n, Boundary b, std::mt19937_64& gen) {
  Occupancy occ(n, b, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    if (gen() & 1) occ.set(i);
  return occ;
}

bool bit(const std::vector<std::uint64_t>& w, std::size_t i) { return (w[i / 64] >> (i % 64)) & 1; }

TEST(ArrivalField, Validation) {
  EXPECT_THROW(ArrivalField({}, Boundary::free), std::invalid_argument);
  EXPECT_THROW(ArrivalField({0.1, 0.2}, Boundary::ring), std::invalid_argument);
  EXPECT_THROW(ArrivalField({0.1, NAN, 0.3}, Boundary::free), std::invalid_argument);
  EXPECT_THROW(ArrivalField({0.1, 1.5}, Boundary::free), std::invalid_argument);
  EXPECT_THROW(ArrivalField({-0.1}, Boundary::free), std::invalid_argument);
  EXPECT_NO_THROW(ArrivalField({0.5}, Boundary::free));
  EXPECT_NO_THROW(ArrivalField({0.0, 1.0, 0.5}, Boundary::ring));
}

TEST(Occupancy, ShiftedMatchesNaive) {
  std::mt19937_64 gen(7);
  for (std::size_t n : {1u, 3u, 5u, 63u, 64u, 65u, 127u, 128u, 130u, 200u, 1000u}) {
    for (auto b : {Boundary::free, Boundary::ring}) {
      if (b == Boundary::ring && n < 3) continue;
      const auto occ = random_occupancy(n, b, gen);
      for (std::ptrdiff_t off : {-130, -65, -64, -63, -2, -1, 0, 1, 2, 5, 63, 64, 65, 129, 1001}) {
        const auto sh = occ.shifted(off);
        for (std::size_t i = 0; i < n; ++i) {
          const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + off;
          bool expected;
          if (b == Boundary::ring) {
            const auto nn = static_cast<std::ptrdiff_t>(n);
            expected = occ.test(static_cast<std::size_t>(((j % nn) + nn) % nn));
          } else {
            expected = j >= 0 && j < static_cast<std::ptrdiff_t>(n) && occ.test(j);
          }
          ASSERT_EQ(bit(sh, i), expected) << "n=" << n << " off=" << off << " i=" << i;
        }
        // Nothing past the end.
        for (std::size_t i = n; i < sh.size() * 64; ++i) ASSERT_FALSE(bit(sh, i));
      }
    }
  }
}

TEST(Occupancy, RangeMaskAndCounts) {
  Occupancy occ(130, Boundary::free, 1.0);
  const auto m = occ.range_mask(3, 129);
  for (std::size_t i = 0; i < 192; ++i) EXPECT_EQ(bit(m, i), i >= 3 && i < 129) << i;
  const auto clipped = occ.range_mask(100, 500);
  for (std::size_t i = 0; i < 192; ++i) EXPECT_EQ(bit(clipped, i), i >= 100 && i < 130) << i;

  occ.set(0);
  occ.set(1);
  occ.set(64);
  occ.set(129);
  EXPECT_EQ(occ.count(), 4u);
  EXPECT_EQ(occ.adjacent_pairs(), 1u);

  Occupancy ring(130, Boundary::ring, 1.0);
  ring.set(0);
  ring.set(129);
  EXPECT_EQ(ring.adjacent_pairs(), 1u);
}

}  // namespace
