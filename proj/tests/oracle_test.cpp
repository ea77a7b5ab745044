#include "rsa/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "rsa/analytic.hpp"
#include "rsa/simulate.hpp"
#include "test_support.hpp"

namespace {

namespace orc = rsa::oracle;
using orc::Atom;
using orc::PatternSpec;
using rsa::testing::simpson;

TEST(ExactPatternProb, SmallWindows) {
  for (double t : {0.0, 0.2, 0.5, 0.8, 1.0}) {
    EXPECT_NEAR(orc::exact_pattern_prob(1, t, {{0, Atom::attempted}}), t, 1e-15);
    // P(t_0 <= t, t_0 < t_1) = int_0^t (1 - u) du
    const double two = simpson([](double u) { return 1 - u; }, 0, t);
    EXPECT_NEAR(orc::exact_pattern_prob(2, t, {{0, Atom::occupied}}), two, 1e-13);
    const double three = simpson([](double u) { return (1 - u) * (1 - u); }, 0, t);
    EXPECT_NEAR(orc::exact_pattern_prob(3, t, {{1, Atom::occupied}}), three, 1e-13);
    EXPECT_NEAR(orc::exact_pattern_prob(3, t, {{1, Atom::occupied}}),
                rsa::analytic::g_event_prob(0, 0, t), 1e-14);
  }
}

TEST(ExactPatternProb, ComplementsAndPartition) {
  for (double t : {0.1, 0.45, 0.9}) {
    for (int site = 0; site < 6; ++site) {
      const double occ = orc::exact_pattern_prob(6, t, {{site, Atom::occupied}});
      const double vac = orc::exact_pattern_prob(6, t, {{site, Atom::vacant}});
      EXPECT_NEAR(occ + vac, 1.0, 1e-13);
      EXPECT_GE(occ, 0.0);
      EXPECT_LE(occ, 1.0);
    }
    EXPECT_NEAR(orc::exact_pattern_prob(5, t, {{1, Atom::not_attempted}, {2, Atom::not_attempted}}),
                (1 - t) * (1 - t), 1e-14);
    EXPECT_NEAR(orc::exact_pattern_prob(5, t, {{1, Atom::attempted}, {2, Atom::attempted}}), t * t,
                1e-14);
    EXPECT_NEAR(orc::exact_pattern_prob(5, t, {{1, Atom::attempted}, {2, Atom::not_attempted}}),
                t * (1 - t), 1e-14);
  }
}

TEST(ExactPatternProb, AgreesWithSampledWindows) {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double t = 0.6;
  const PatternSpec pattern{{1, Atom::vacant}, {2, Atom::vacant}, {4, Atom::occupied}};
  const int samples = 200000;
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    std::vector<double> times(6);
    for (auto& x : times) x = u(gen);
    const auto occ = rsa::simulate::chronological_fill(rsa::ArrivalField(times, rsa::Boundary::free), t);
    hits += !occ.test(1) && !occ.test(2) && occ.test(4);
  }
  const double p = orc::exact_pattern_prob(6, t, pattern);
  const double se = std::sqrt(p * (1 - p) / samples);
  EXPECT_NEAR(static_cast<double>(hits) / samples, p, 4 * se);
}

TEST(ExactPatternProb, Validation) {
  EXPECT_THROW(orc::exact_pattern_prob(11, 0.5, {}), std::invalid_argument);
  EXPECT_THROW(orc::exact_pattern_prob(0, 0.5, {}), std::invalid_argument);
  EXPECT_THROW(orc::exact_pattern_prob(3, 0.5, {{3, Atom::occupied}}), std::invalid_argument);
  EXPECT_THROW(orc::exact_pattern_prob(3, 0.5, {{1, Atom::occupied}, {1, Atom::vacant}}),
               std::invalid_argument);
  EXPECT_THROW(orc::exact_pattern_prob(3, 0.5, {{1, Atom::attempted}, {1, Atom::not_attempted}}),
               std::invalid_argument);
  EXPECT_THROW(orc::exact_pattern_prob(3, 0.5, {{1, Atom::occupied}, {1, Atom::not_attempted}}),
               std::invalid_argument);
  EXPECT_THROW(orc::exact_pattern_prob(3, 1.5, {}), std::domain_error);
  EXPECT_NEAR(orc::exact_pattern_prob(4, 0.3, {}), 1.0, 1e-15);
}

TEST(ForEachOrder, EnumerationOrderAndCount) {
  std::vector<std::pair<std::uint32_t, std::vector<int>>> seen;
  orc::for_each_order(3, [&](std::uint32_t subset, std::span<const int> order) {
    seen.emplace_back(subset, std::vector<int>(order.begin(), order.end()));
  });
  ASSERT_EQ(seen.size(), 16u);  // 1 + 3 + 6 + 6
  EXPECT_EQ(seen[0].first, 0u);
  EXPECT_EQ(seen[1].second, std::vector<int>{0});
  EXPECT_EQ(seen[3].second, std::vector<int>{2});
  EXPECT_EQ(seen[4].second, (std::vector<int>{0, 1}));
  EXPECT_EQ(seen[5].second, (std::vector<int>{1, 0}));
  EXPECT_EQ(seen[10].second, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(seen[15].second, (std::vector<int>{2, 1, 0}));
}

TEST(DepositInOrder, MatchesChronologicalFill) {
  for (int n = 1; n <= 6; ++n) {
    orc::for_each_order(n, [&](std::uint32_t, std::span<const int> order) {
      std::vector<double> times(n, 0.95);
      for (std::size_t r = 0; r < order.size(); ++r) times[order[r]] = (r + 1.0) / (order.size() + 2.0);
      const auto occ = rsa::simulate::chronological_fill(rsa::ArrivalField(times, rsa::Boundary::free), 0.9);
      std::uint32_t mask = 0;
      for (int s = 0; s < n; ++s) mask |= static_cast<std::uint32_t>(occ.test(s)) << s;
      ASSERT_EQ(mask, orc::deposit_in_order(n, order));
    });
  }
}

TEST(ExactCenterDensity, WithinWindowBound) {
  const double exact = rsa::analytic::density_exact(0.3);
  EXPECT_NEAR(orc::exact_center_density(4, 0.3), exact, 2 * std::pow(0.3, 5) / 120);
  EXPECT_NEAR(orc::window_bound(4, 0.3), 4.05e-5, 1e-7);
  EXPECT_EQ(orc::exact_center_density(4, 0.0), 0.0);
  const double small = 1e-4;
  EXPECT_NEAR(orc::exact_center_density(1, small), small, 2 * small * small);
  EXPECT_THROW(orc::exact_center_density(5, 0.5), std::invalid_argument);
}

TEST(ExactCenterDensity, NeighbouringRadiiWithinBound) {
  for (double t : {0.3, 0.6, 1.0})
    for (int r = 1; r <= 3; ++r)
      EXPECT_LE(std::fabs(orc::exact_center_density(r, t) - orc::exact_center_density(r + 1, t)),
                orc::window_bound(r, t));
}

TEST(ExactGamma, AgreesWithClosedForm) {
  EXPECT_NEAR(orc::exact_gamma(3, 2, 0.3), rsa::analytic::gamma_even_exact(2, 0.3),
              orc::window_bound(3, 0.3));
  EXPECT_NEAR(orc::window_bound(3, 0.3), 6.75e-4, 1e-8);
  EXPECT_EQ(orc::exact_gamma(3, 2, 0.0), 0.0);
  EXPECT_NEAR(orc::exact_gamma(3, 2, 1.0), 0.0, orc::window_bound(3, 1.0));
  EXPECT_NEAR(orc::exact_gamma(2, 4, 0.5), rsa::analytic::gamma_even_exact(4, 0.5),
              orc::window_bound(2, 0.5));
  EXPECT_THROW(orc::exact_gamma(3, 3, 0.5), std::invalid_argument);
  EXPECT_THROW(orc::exact_gamma(4, 2, 0.5), std::invalid_argument);
}

TEST(ExactGamma, ComponentsMatchPartitionCells) {
  const int origin = 4;  // window -4 .. 5
  const Atom cells[4][2] = {{Atom::not_attempted, Atom::not_attempted},
                            {Atom::attempted, Atom::attempted},
                            {Atom::attempted, Atom::not_attempted},
                            {Atom::not_attempted, Atom::attempted}};
  for (double t : {0.3, 0.6, 0.9}) {
    for (int i = 0; i < 4; ++i) {
      const PatternSpec p{{origin - 1, Atom::vacant}, {origin, Atom::vacant},
                          {origin + 2, Atom::occupied}, {origin - 1, cells[i][0]},
                          {origin, cells[i][1]}};
      EXPECT_NEAR(orc::exact_pattern_prob(10, t, p), rsa::analytic::gamma_component(i + 1, 2, t),
                  orc::window_bound(3, t))
          << "component " << i + 1 << " t=" << t;
    }
  }
}

TEST(ExactPairProb, ConsistentWithDensity) {
  EXPECT_NEAR(orc::exact_pair_prob(4, 0, 0.3), orc::exact_center_density(4, 0.3), 1e-15);
  EXPECT_EQ(orc::exact_pair_prob(3, 1, 0.8), 0.0);  // neighbours never both occupied
  const double t = 0.5;
  const double rho = rsa::analytic::density_exact(t);
  const double c2 = rsa::analytic::correlation_exact(2, t).value;
  EXPECT_NEAR(orc::exact_pair_prob(3, 2, t), c2 + rho * rho, 3 * orc::window_bound(3, t));
}

}  // namespace
