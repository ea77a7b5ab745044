#include "rsa/simulate.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>

#include "rsa/analytic.hpp"

namespace rsa::simulate {
namespace {

// Key comparison "site a comes after site b" under the (time, index) order.
inline bool later(std::span<const double> t, std::size_t a, std::size_t b) {
  return t[a] > t[b] || (t[a] == t[b] && a > b);
}

// A ring site whose right neighbor comes later; its right run is empty.
std::size_t right_anchor(std::span<const double> t) {
  const std::size_t n = t.size();
  for (std::size_t s = 0; s < n; ++s)
    if (!later(t, s, (s + 1) % n)) return s;
  return 0;  // unreachable: the earliest key is always an anchor
}

std::size_t left_anchor(std::span<const double> t) {
  const std::size_t n = t.size();
  for (std::size_t s = 0; s < n; ++s)
    if (!later(t, s, (s + n - 1) % n)) return s;
  return 0;
}

template <typename Index>
Occupancy chronological_impl(const ArrivalField& field, double threshold) {
  const auto times = field.times();
  const std::size_t n = times.size();
  const bool ring = field.boundary() == Boundary::ring;

  std::vector<Index> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (times[i] <= threshold) order.push_back(static_cast<Index>(i));
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    return times[a] < times[b] || (times[a] == times[b] && a < b);
  });

  Occupancy occ(n, field.boundary(), threshold);
  for (const Index idx : order) {
    const std::size_t s = idx;
    bool left_busy = false;
    bool right_busy = false;
    if (s > 0) left_busy = occ.test(s - 1);
    else if (ring) left_busy = occ.test(n - 1);
    if (s + 1 < n) right_busy = occ.test(s + 1);
    else if (ring) right_busy = occ.test(0);
    if (!left_busy && !right_busy) occ.set(s);
  }
  return occ;
}

inline void put_bit(std::vector<std::uint64_t>& words, std::size_t i, bool v) {
  words[i >> 6] |= static_cast<std::uint64_t>(v) << (i & 63);
}

inline bool get_bit(const std::vector<std::uint64_t>& words, std::size_t i) {
  return (words[i >> 6] >> (i & 63)) & 1u;
}

}  // namespace

Occupancy chronological_fill(const ArrivalField& field, double t) {
  analytic::check_time(t);
  if (field.size() <= std::numeric_limits<std::uint32_t>::max())
    return chronological_impl<std::uint32_t>(field, t);
  return chronological_impl<std::size_t>(field, t);
}

Occupancy run_parity_fill(const ArrivalField& field, double t) {
  analytic::check_time(t);
  const auto times = field.times();
  const double* x = times.data();
  const std::size_t n = times.size();
  Occupancy occ(n, field.boundary(), t);

  // right_even[s]: the right descent run from s has even length. The run from s
  // is odd exactly when s+1 comes earlier and its own run is even.
  std::vector<std::uint64_t> right_even(occ.words().size(), 0);
  if (field.boundary() == Boundary::free) {
    bool even = true;
    put_bit(right_even, n - 1, even);
    for (std::size_t s = n - 1; s-- > 0;) {
      even = !((x[s] > x[s + 1]) & even);
      put_bit(right_even, s, even);
    }
  } else {
    const std::size_t anchor = right_anchor(times);
    bool even = true;
    put_bit(right_even, anchor, even);
    for (std::size_t s = anchor; s-- > 0;) {
      even = !((x[s] > x[s + 1]) & even);
      put_bit(right_even, s, even);
    }
    if (anchor != n - 1) {
      even = !((x[n - 1] >= x[0]) & get_bit(right_even, 0));
      put_bit(right_even, n - 1, even);
      for (std::size_t s = n - 1; s-- > anchor + 1;) {
        even = !((x[s] > x[s + 1]) & even);
        put_bit(right_even, s, even);
      }
    }
  }

  // Left runs: a tie with the left neighbor counts as a descent (s attempts later).
  auto words = occ.words();
  auto emit = [&](std::size_t s, bool left_even) {
    const bool occupied = (x[s] <= t) & left_even & get_bit(right_even, s);
    words[s >> 6] |= static_cast<std::uint64_t>(occupied) << (s & 63);
  };
  if (field.boundary() == Boundary::free) {
    bool even = true;
    emit(0, even);
    for (std::size_t s = 1; s < n; ++s) {
      even = !((x[s] >= x[s - 1]) & even);
      emit(s, even);
    }
  } else {
    const std::size_t anchor = left_anchor(times);
    bool even = true;
    std::vector<std::uint64_t> left_even(words.size(), 0);
    auto record = [&](std::size_t s, bool v) {
      put_bit(left_even, s, v);
      emit(s, v);
    };
    record(anchor, even);
    for (std::size_t s = anchor + 1; s < n; ++s) {
      even = !((x[s] >= x[s - 1]) & even);
      record(s, even);
    }
    if (anchor != 0) {
      even = !((x[0] > x[n - 1]) & get_bit(left_even, n - 1));
      record(0, even);
      for (std::size_t s = 1; s < anchor; ++s) {
        even = !((x[s] >= x[s - 1]) & even);
        record(s, even);
      }
    }
  }
  return occ;
}

RunLengths compute_runs(const ArrivalField& field) {
  const auto times = field.times();
  const std::size_t n = times.size();
  RunLengths runs{std::vector<std::uint32_t>(n, 0), std::vector<std::uint32_t>(n, 0)};

  if (field.boundary() == Boundary::free) {
    for (std::size_t s = n - 1; s-- > 0;)
      runs.right[s] = later(times, s, s + 1) ? runs.right[s + 1] + 1 : 0;
    for (std::size_t s = 1; s < n; ++s)
      runs.left[s] = later(times, s, s - 1) ? runs.left[s - 1] + 1 : 0;
    return runs;
  }

  const std::size_t ra = right_anchor(times);
  for (std::size_t step = 1; step < n; ++step) {
    const std::size_t s = (ra + n - step) % n;
    const std::size_t next = (s + 1) % n;
    runs.right[s] = later(times, s, next) ? runs.right[next] + 1 : 0;
  }
  const std::size_t la = left_anchor(times);
  for (std::size_t step = 1; step < n; ++step) {
    const std::size_t s = (la + step) % n;
    const std::size_t prev = (s + n - 1) % n;
    runs.left[s] = later(times, s, prev) ? runs.left[prev] + 1 : 0;
  }
  return runs;
}

}  // namespace rsa::simulate
