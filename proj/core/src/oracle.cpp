#include "rsa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rsa/analytic.hpp"

namespace rsa::oracle {
namespace {

struct Masks {
  std::uint32_t occupied = 0;
  std::uint32_t vacant = 0;
  std::uint32_t attempted = 0;
  std::uint32_t not_attempted = 0;
};

Masks to_masks(const PatternSpec& pattern) {
  Masks m;
  for (const auto& c : pattern.constraints()) {
    const std::uint32_t bit = std::uint32_t{1} << c.site;
    switch (c.atom) {
      case Atom::occupied: m.occupied |= bit; break;
      case Atom::vacant: m.vacant |= bit; break;
      case Atom::attempted: m.attempted |= bit; break;
      case Atom::not_attempted: m.not_attempted |= bit; break;
    }
  }
  return m;
}

void check_window(int n) {
  if (n < 1 || n > kMaxWindow)
    throw std::invalid_argument("oracle window must have 1.." + std::to_string(kMaxWindow) +
                                " sites, got " + std::to_string(n));
}

// Advances `combo` (sorted, values < n) to the next k-combination in
// lexicographic order; false once exhausted.
bool next_combination(std::vector<int>& combo, int n) {
  const int k = static_cast<int>(combo.size());
  int i = k - 1;
  while (i >= 0 && combo[i] == n - k + i) --i;
  if (i < 0) return false;
  ++combo[i];
  for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
  return true;
}

}  // namespace

PatternSpec::PatternSpec(std::initializer_list<SiteConstraint> constraints)
    : constraints_(constraints) {}

PatternSpec& PatternSpec::add(int site, Atom atom) {
  constraints_.push_back({site, atom});
  return *this;
}

void PatternSpec::validate(int window) const {
  for (const auto& c : constraints_)
    if (c.site < 0 || c.site >= window)
      throw std::invalid_argument("pattern site " + std::to_string(c.site) + " outside window of " +
                                  std::to_string(window));
  const Masks m = to_masks(*this);
  // Occupied implies attempted, so occupied & not_attempted is contradictory too.
  if ((m.occupied & m.vacant) || (m.attempted & m.not_attempted) || (m.occupied & m.not_attempted))
    throw std::invalid_argument("inconsistent pattern: contradictory atoms on one site");
}

std::uint32_t deposit_in_order(int n, std::span<const int> order) {
  std::uint32_t occ = 0;
  for (const int s : order) {
    const std::uint32_t left = s > 0 ? (occ >> (s - 1)) & 1u : 0u;
    const std::uint32_t right = s + 1 < n ? (occ >> (s + 1)) & 1u : 0u;
    if (!left && !right) occ |= std::uint32_t{1} << s;
  }
  return occ;
}

void for_each_order(int n,
                    const std::function<void(std::uint32_t, std::span<const int>)>& visit) {
  check_window(n);
  std::vector<int> combo;
  for (int k = 0; k <= n; ++k) {
    combo.resize(k);
    std::iota(combo.begin(), combo.end(), 0);
    do {
      std::uint32_t subset = 0;
      for (int s : combo) subset |= std::uint32_t{1} << s;
      std::vector<int> order = combo;
      do {
        visit(subset, order);
      } while (std::next_permutation(order.begin(), order.end()));
    } while (next_combination(combo, n));
  }
}

double exact_pattern_prob(int n, double t, const PatternSpec& pattern) {
  check_window(n);
  analytic::check_time(t);
  pattern.validate(n);
  const Masks m = to_masks(pattern);

  double total = 0.0;
  std::vector<int> combo;
  for (int k = 0; k <= n; ++k) {
    const double weight = std::pow(t, k) * std::pow(1.0 - t, n - k);
    double factorial = 1.0;
    for (int i = 2; i <= k; ++i) factorial *= i;

    combo.resize(k);
    std::iota(combo.begin(), combo.end(), 0);
    double level = 0.0;
    do {
      std::uint32_t subset = 0;
      for (int s : combo) subset |= std::uint32_t{1} << s;
      if ((subset & m.attempted) != m.attempted || (subset & m.not_attempted) != 0) continue;
      if ((subset & m.occupied) != m.occupied) continue;

      std::uint64_t hits = 0;
      std::vector<int> order = combo;
      do {
        const std::uint32_t occ = deposit_in_order(n, order);
        if ((occ & m.occupied) == m.occupied && (occ & m.vacant) == 0) ++hits;
      } while (std::next_permutation(order.begin(), order.end()));
      level += static_cast<double>(hits) / factorial;
    } while (next_combination(combo, n));
    total += weight * level;
  }
  return total;
}

double exact_center_density(int radius, double t) {
  if (radius < 1) throw std::invalid_argument("radius must be positive");
  const int n = 2 * radius + 1;
  check_window(n);
  return exact_pattern_prob(n, t, PatternSpec{{radius, Atom::occupied}});
}

double exact_gamma(int radius, int s, double t) {
  if (radius < 1) throw std::invalid_argument("radius must be positive");
  if (s < 2 || s % 2 != 0) throw std::invalid_argument("s must be an even integer >= 2");
  const int n = s + 2 + 2 * radius;
  check_window(n);
  const int origin = radius + 1;
  return exact_pattern_prob(n, t,
                            PatternSpec{{origin - 1, Atom::vacant},
                                        {origin, Atom::vacant},
                                        {origin + s, Atom::occupied}});
}

double exact_pair_prob(int radius, int s, double t) {
  if (radius < 1) throw std::invalid_argument("radius must be positive");
  if (s < 0) throw std::invalid_argument("s must be nonnegative");
  const int n = s + 1 + 2 * radius;
  check_window(n);
  PatternSpec pattern{{radius, Atom::occupied}};
  if (s > 0) pattern.add(radius + s, Atom::occupied);
  return exact_pattern_prob(n, t, pattern);
}

double window_bound(int radius, double t) {
  return 2.0 * analytic::power_over_factorial(t, radius + 1);
}

}  // namespace rsa::oracle
