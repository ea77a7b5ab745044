#include "rsa/verify.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>

#include "rsa/analytic.hpp"
#include "rsa/montecarlo.hpp"
#include "rsa/oracle.hpp"
#include "rsa/simulate.hpp"

namespace rsa::verify {
namespace {

namespace an = rsa::analytic;

constexpr double kCorruption = 1e-2;

std::vector<double> time_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

struct Check {
  std::string name;
  bool full_only;
  // Returns (error, tolerance, detail); `bias` is added to reference values.
  std::function<CheckResult(double bias)> run;
};

CheckResult make(double error, double tolerance, std::string detail = {}) {
  CheckResult r;
  r.error = error;
  r.tolerance = tolerance;
  r.passed = error <= tolerance;
  r.detail = std::move(detail);
  return r;
}

// Simulator corpus properties on `fields` random fields of 1000 sites.
struct CorpusStats {
  std::size_t mismatched_bits = 0;
  std::size_t adjacent_pairs = 0;
  std::size_t unjammed_sites = 0;
  std::size_t monotonicity_breaks = 0;
};

CorpusStats simulate_corpus(std::uint64_t seed, std::uint32_t fields) {
  const auto grid = time_grid();
  CorpusStats stats;
  for (std::uint32_t f = 0; f < fields; ++f) {
    const auto base = montecarlo::draw_field(seed, f, 1000, Boundary::free);
    for (auto boundary : {Boundary::free, Boundary::ring}) {
      const ArrivalField field(std::vector<double>(base.times().begin(), base.times().end()),
                               boundary);
      Occupancy previous;
      for (std::size_t ti = 0; ti < grid.size(); ++ti) {
        const auto a = simulate::chronological_fill(field, grid[ti]);
        const auto b = simulate::run_parity_fill(field, grid[ti]);
        for (std::size_t w = 0; w < a.words().size(); ++w)
          stats.mismatched_bits += std::popcount(a.words()[w] ^ b.words()[w]);
        stats.adjacent_pairs += b.adjacent_pairs();
        if (ti > 0)
          for (std::size_t w = 0; w < b.words().size(); ++w)
            stats.monotonicity_breaks += std::popcount(previous.words()[w] & ~b.words()[w]);
        if (grid[ti] == 1.0) {
          const std::size_t n = b.size();
          for (std::size_t s = 0; s < n; ++s) {
            if (b.test(s)) continue;
            const bool ring = boundary == Boundary::ring;
            const bool left = s > 0 ? b.test(s - 1) : (ring && b.test(n - 1));
            const bool right = s + 1 < n ? b.test(s + 1) : (ring && b.test(0));
            if (!left && !right) ++stats.unjammed_sites;
          }
        }
        previous = b;
      }
    }
  }
  return stats;
}

std::size_t oracle_fill_mismatches(int max_n) {
  std::size_t bad = 0;
  for (int n = 1; n <= max_n; ++n) {
    oracle::for_each_order(n, [&](std::uint32_t subset, std::span<const int> order) {
      // Attempting sites get increasing times below 1/2 in the given order;
      // the others attempt after the threshold.
      std::vector<double> times(n, 0.9);
      for (std::size_t rank = 0; rank < order.size(); ++rank)
        times[order[rank]] = 0.5 * (rank + 1.0) / (order.size() + 1.0);
      const auto occ = simulate::chronological_fill(ArrivalField(times, Boundary::free), 0.5);
      std::uint32_t mask = 0;
      for (int s = 0; s < n; ++s)
        if (occ.test(s)) mask |= std::uint32_t{1} << s;
      if (mask != oracle::deposit_in_order(n, order) || (mask & ~subset) != 0) ++bad;
    });
  }
  return bad;
}

std::vector<Check> build_checks(const Options& opt) {
  std::vector<Check> checks;
  const auto grid = time_grid();

  checks.push_back({"density.closed_form", false, [](double bias) {
    const double err = std::fabs(an::density_exact(1.0) - (-0.5 * std::expm1(-2.0) + bias));
    return make(err, 1e-12);
  }});

  checks.push_back({"density.ik_series", false, [grid](double bias) {
    double worst = 0.0;
    for (double t : grid) {
      double sum = 0.0;
      for (int k = 0; k <= 60; ++k) sum += an::i_k(k, t);
      worst = std::max(worst, std::fabs(sum - (an::density_exact(t) + bias)));
    }
    return make(worst, 1e-12);
  }});

  checks.push_back({"density.event_sum", false, [grid](double bias) {
    double worst = 0.0;
    for (double t : grid) {
      double sum = 0.0;
      for (int j = 0; j <= 60; ++j)
        for (int k = 0; k <= 60; ++k) sum += an::g_event_prob(j, k, t);
      worst = std::max(worst, std::fabs(sum - (an::density_exact(t) + bias)));
    }
    return make(worst, 1e-8);
  }});

  checks.push_back({"density.monotone", false, [](double bias) {
    double breaks = bias != 0.0 ? 1.0 : 0.0;
    for (int i = 1; i <= 1000; ++i)
      if (!(an::density_exact(i / 1000.0) > an::density_exact((i - 1) / 1000.0))) breaks += 1;
    return make(breaks, 0.0);
  }});

  checks.push_back({"runs.b_sum", false, [grid](double bias) {
    double worst = 0.0;
    for (double t : grid) {
      double sum = 0.0;
      for (int k = 0; k <= 60; ++k) sum += an::b_run_prob(k, t);
      worst = std::max(worst, std::fabs(sum - (std::expm1(-t) + t + bias)));
    }
    return make(worst, 1e-12);
  }});

  checks.push_back({"correlation.variance", false, [grid](double bias) {
    double worst = 0.0;
    for (double t : grid) {
      const double rho = an::density_exact(t);
      const double c0 = an::correlation_exact(0, t, 1e-13).value;
      worst = std::max(worst, std::fabs(c0 - (rho * (1.0 - rho) + bias)));
    }
    return make(worst, 1e-12);
  }});

  checks.push_back({"correlation.tail_sum", false, [grid](double bias) {
    double worst = 0.0;
    for (double t : grid)
      for (int r = 0; r <= 20; ++r) {
        const double lhs = an::correlation_exact(r + 1, t, 1e-15).value +
                           an::correlation_exact(r, t, 1e-15).value;
        worst = std::max(worst, std::fabs(lhs - (an::tail_sum(r, t) + bias)));
      }
    return make(worst, 1e-10);
  }});

  checks.push_back({"correlation.telescope", false, [grid](double bias) {
    double worst = 0.0;
    for (double t : grid)
      for (int s = 0; s <= 10; ++s)
        worst = std::max(worst, std::fabs(an::telescope_partial(s, t, 30) -
                                          (an::correlation_exact(s, t, 1e-15).value + bias)));
    return make(worst, 1e-10);
  }});

  checks.push_back({"correlation.sign_pattern", false, [grid](double bias) {
    double breaks = bias != 0.0 ? 1.0 : 0.0;
    for (double t : grid)
      for (int s = 0; s <= 20; ++s) {
        const double c = an::correlation_exact(s, t, 1e-300).value;
        if ((s % 2 == 0) ? !(c > 0.0) : !(c < 0.0)) breaks += 1;
      }
    return make(breaks, 0.0);
  }});

  checks.push_back({"correlation.decay", false, [grid](double bias) {
    double breaks = bias != 0.0 ? 1.0 : 0.0;
    for (double t : grid)
      for (int s = 0; s <= 30; ++s) {
        const double bound = 0.5 * an::power_over_factorial(2.0 * t, s + 1);
        if (std::fabs(an::correlation_exact(s, t, 1e-300).value) > bound) breaks += 1;
      }
    return make(breaks, 0.0);
  }});

  checks.push_back({"gamma.assembly", false, [grid](double bias) {
    double worst = 0.0;
    for (double t : grid)
      for (int s = 2; s <= 20; s += 2) {
        double sum = 0.0;
        for (int i = 1; i <= 4; ++i) sum += an::gamma_component(i, s, t);
        worst = std::max(worst, std::fabs(sum - (an::gamma_even_exact(s, t) + bias)));
      }
    return make(worst, 1e-10);
  }});

  checks.push_back({"gamma.components_13", false, [grid](double bias) {
    double worst = 0.0;
    for (double t : grid)
      for (int s = 2; s <= 20; s += 2) {
        double odd = 0.0;
        for (int i = 0; i <= (s - 2) / 2; ++i) odd += an::power_over_factorial(t, 2 * i + 1);
        const double expected = std::exp(-2.0 * t) * (1.0 - t) * odd;
        const double sum = an::gamma_component(1, s, t) + an::gamma_component(3, s, t);
        worst = std::max(worst, std::fabs(sum - (expected + bias)));
      }
    return make(worst, 1e-12);
  }});

  checks.push_back({"gamma.s1_s2", false, [grid](double bias) {
    double worst = 0.0;
    for (double t : grid)
      for (int r = 2; r <= 10; ++r) {
        const auto v = an::s1_s2_identity(r, t);
        worst = std::max(worst, std::fabs(v.direct - (v.simplified + bias)));
      }
    return make(worst, 1e-10);
  }});

  checks.push_back({"simulate.equivalence", false, [opt](double bias) {
    const auto stats = simulate_corpus(opt.seed ^ 0x5157u, opt.level == Level::full ? 10000 : 300);
    return make(static_cast<double>(stats.mismatched_bits) + (bias != 0.0), 0.0,
                "fields: " + std::to_string(opt.level == Level::full ? 10000 : 300));
  }});

  checks.push_back({"simulate.exclusion_jamming_monotone", false, [opt](double bias) {
    const auto stats = simulate_corpus(opt.seed ^ 0xA11u, opt.level == Level::full ? 2000 : 100);
    const auto bad = stats.adjacent_pairs + stats.unjammed_sites + stats.monotonicity_breaks;
    return make(static_cast<double>(bad) + (bias != 0.0), 0.0);
  }});

  checks.push_back({"oracle.center_density", false, [](double bias) {
    const double err =
        std::fabs(oracle::exact_center_density(4, 0.3) - (an::density_exact(0.3) + bias));
    return make(err, oracle::window_bound(4, 0.3));
  }});

  checks.push_back({"oracle.gamma", false, [](double bias) {
    const double err =
        std::fabs(oracle::exact_gamma(3, 2, 0.3) - (an::gamma_even_exact(2, 0.3) + bias));
    return make(err, oracle::window_bound(3, 0.3));
  }});

  checks.push_back({"oracle.gamma_components", false, [](double bias) {
    using oracle::Atom;
    // Window -4 .. 5 with the origin at index 4.
    const int origin = 4;
    const int n = 10;
    const double t = 0.3;
    const Atom cells[4][2] = {{Atom::not_attempted, Atom::not_attempted},
                              {Atom::attempted, Atom::attempted},
                              {Atom::attempted, Atom::not_attempted},
                              {Atom::not_attempted, Atom::attempted}};
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
      oracle::PatternSpec p{{origin - 1, Atom::vacant},
                            {origin, Atom::vacant},
                            {origin + 2, Atom::occupied},
                            {origin - 1, cells[i][0]},
                            {origin, cells[i][1]}};
      const double exact = oracle::exact_pattern_prob(n, t, p);
      worst = std::max(worst, std::fabs(exact - (an::gamma_component(i + 1, 2, t) + bias)));
    }
    return make(worst, oracle::window_bound(3, t));
  }});

  checks.push_back({"oracle.partition", false, [](double bias) {
    using oracle::Atom;
    double worst = 0.0;
    for (double t : {0.2, 0.5, 0.9}) {
      const double m1 = oracle::exact_pattern_prob(
          4, t, {{1, Atom::not_attempted}, {2, Atom::not_attempted}});
      const double m2 = oracle::exact_pattern_prob(4, t, {{1, Atom::attempted}, {2, Atom::attempted}});
      const double occ = oracle::exact_pattern_prob(5, t, {{2, Atom::occupied}});
      const double vac = oracle::exact_pattern_prob(5, t, {{2, Atom::vacant}});
      worst = std::max({worst, std::fabs(m1 - ((1 - t) * (1 - t) + bias)),
                        std::fabs(m2 - t * t), std::fabs(occ + vac - 1.0)});
    }
    return make(worst, 1e-13);
  }});

  checks.push_back({"oracle.deposition_matches_fill", false, [opt](double bias) {
    const int max_n = opt.level == Level::full ? 9 : 7;
    return make(static_cast<double>(oracle_fill_mismatches(max_n)) + (bias != 0.0), 0.0,
                "n <= " + std::to_string(max_n));
  }});

  // Monte Carlo checks share one run; computed lazily on first use.
  auto tables = std::make_shared<std::optional<montecarlo::Tables>>();
  auto mc = [opt, tables]() -> const montecarlo::Tables& {
    if (!tables->has_value()) {
      montecarlo::SimConfig cfg;
      cfg.sites = opt.mc_sites;
      cfg.replicas = opt.mc_replicas;
      cfg.seed = opt.seed;
      cfg.threads = opt.threads;
      cfg.s_max = 4;
      const int gammas[] = {2, 4};
      *tables = montecarlo::run_observables(cfg, gammas);
    }
    return **tables;
  };

  // Worst |mean - exact| / stderr; tolerance 4.
  auto zscore = [](const montecarlo::Estimate& e, double exact) {
    const double diff = std::fabs(e.mean - exact);
    if (e.std_error == 0.0) return diff < 1e-15 ? 0.0 : INFINITY;
    return diff / e.std_error;
  };

  checks.push_back({"mc.density", true, [mc, zscore](double bias) {
    double worst = 0.0;
    double worst_se = 0.0;
    for (const auto& [t, e] : mc().density) {
      worst = std::max(worst, zscore(e, an::density_exact(t) + bias));
      worst_se = std::max(worst_se, e.std_error);
    }
    return make(worst_se > 2e-4 ? INFINITY : worst, 4.0, "max stderr " + std::to_string(worst_se));
  }});

  checks.push_back({"mc.correlation", true, [mc, zscore](double bias) {
    double worst = 0.0;
    for (const auto& [key, e] : mc().correlation)
      worst = std::max(worst, zscore(e, an::correlation_exact(key.first, key.second).value + bias));
    return make(worst, 4.0);
  }});

  checks.push_back({"mc.gamma", true, [mc, zscore](double bias) {
    double worst = 0.0;
    for (const auto& [key, g] : mc().gamma)
      worst = std::max(worst, zscore(g.gamma, an::gamma_even_exact(key.first, key.second) + bias));
    return make(worst, 4.0);
  }});

  checks.push_back({"mc.phi_decomposition", true, [mc](double bias) {
    double worst = 0.0;
    for (const auto& [key, g] : mc().gamma) {
      const double residual = g.phi.mean - g.p_next.mean - g.p_s.mean - g.gamma.mean + bias;
      const double combined =
          std::sqrt(g.phi.std_error * g.phi.std_error + g.p_next.std_error * g.p_next.std_error +
                    g.p_s.std_error * g.p_s.std_error + g.gamma.std_error * g.gamma.std_error);
      worst = std::max(worst, std::fabs(residual) - 4.0 * combined);
    }
    return make(worst, 0.0, "residual minus 4 combined stderr");
  }});

  return checks;
}

}  // namespace

std::vector<std::string> check_names(Level level) {
  Options opt;
  opt.level = level;
  std::vector<std::string> names;
  for (const auto& c : build_checks(opt))
    if (level == Level::full || !c.full_only) names.push_back(c.name);
  return names;
}

std::vector<CheckResult> run(const Options& options) {
  auto checks = build_checks(options);
  std::erase_if(checks, [&](const Check& c) { return c.full_only && options.level != Level::full; });
  if (options.corrupt &&
      std::none_of(checks.begin(), checks.end(), [&](const Check& c) { return c.name == *options.corrupt; }))
    throw std::invalid_argument("no check named '" + *options.corrupt + "' at this level");

  std::vector<CheckResult> results;
  for (const auto& c : checks) {
    const double bias = (options.corrupt && *options.corrupt == c.name) ? kCorruption : 0.0;
    CheckResult r = c.run(bias);
    r.name = c.name;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace rsa::verify
