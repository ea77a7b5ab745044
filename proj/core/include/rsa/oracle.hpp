#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

// Exact probabilities on small free-boundary windows by enumerating which
// sites attempt by time t and every order in which they attempt.
namespace rsa::oracle {

inline constexpr int kMaxWindow = 10;

enum class Atom { occupied, vacant, attempted, not_attempted };

struct SiteConstraint {
  int site;
  Atom atom;
};

/// A conjunction of per-site constraints on a window of sites 0..n-1.
class PatternSpec {
 public:
  PatternSpec() = default;
  PatternSpec(std::initializer_list<SiteConstraint> constraints);

  PatternSpec& add(int site, Atom atom);
  std::span<const SiteConstraint> constraints() const { return constraints_; }

  // Throws std::invalid_argument for sites outside the window or
  // contradictory atoms on one site.
  void validate(int window) const;

 private:
  std::vector<SiteConstraint> constraints_;
};

/// Occupied-site mask after the sites in `order` attempt one after another on
/// a free window of n sites. Sites not listed never attempt.
std::uint32_t deposit_in_order(int n, std::span<const int> order);

/// Visits every (attempting subset, order) pair of an n-site window: subsets
/// by size then lexicographically, orders by lexicographic rank.
void for_each_order(int n,
                    const std::function<void(std::uint32_t subset, std::span<const int> order)>& visit);

/// Sum over attempting subsets S of t^|S| (1-t)^{n-|S|} times the fraction of
/// the |S|! orders whose outcome satisfies the pattern.
double exact_pattern_prob(int n, double t, const PatternSpec& pattern);

/// P(center occupied) on a window of 2*radius+1 sites. Differs from the
/// infinite-lattice density by at most 2 t^{radius+1} / (radius+1)!.
double exact_center_density(int radius, double t);

/// P(omega_{-1} = omega_0 = 0, omega_s = 1) on sites -1-radius .. s+radius.
double exact_gamma(int radius, int s, double t);

/// P(omega_0 = omega_s = 1) on sites -radius .. s+radius.
double exact_pair_prob(int radius, int s, double t);

/// 2 t^{radius+1} / (radius+1)!
double window_bound(int radius, double t);

}  // namespace rsa::oracle
