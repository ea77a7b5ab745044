#include "rsa/montecarlo.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "rsa/analytic.hpp"
#include "rsa/philox.hpp"
#include "rsa/simulate.hpp"

namespace rsa::montecarlo {
namespace {

// Field plus occupancy and a handful of shifted copies.
constexpr double kBytesPerSite = sizeof(double) + 6.0 / 8.0;

using Words = std::vector<std::uint64_t>;

std::uint64_t popcount_and(const Words& a, const Words& b, const Words& mask) {
  std::uint64_t n = 0;
  for (std::size_t w = 0; w < a.size(); ++w) n += std::popcount(a[w] & b[w] & mask[w]);
  return n;
}

// Per-replica values, laid out t-major.
struct Layout {
  std::size_t times;
  std::size_t corr;   // s_max + 1
  std::size_t gammas;
  static constexpr std::size_t kGammaFields = 5;

  std::size_t per_time() const { return 1 + corr + gammas * kGammaFields; }
  std::size_t total() const { return times * per_time(); }
  std::size_t density(std::size_t ti) const { return ti * per_time(); }
  std::size_t correlation(std::size_t ti, std::size_t s) const { return ti * per_time() + 1 + s; }
  std::size_t gamma(std::size_t ti, std::size_t gi, std::size_t field) const {
    return ti * per_time() + 1 + corr + gi * kGammaFields + field;
  }
};

void measure(const Occupancy& occ, const SimConfig& config, std::span<const int> gamma_s,
             const Layout& layout, std::size_t ti, std::vector<double>& out) {
  const std::size_t n = occ.size();
  const Words bits(occ.words().begin(), occ.words().end());
  const double count = static_cast<double>(occ.count());
  const double rho = count / static_cast<double>(n);
  out[layout.density(ti)] = rho;

  const bool ring = config.boundary == Boundary::ring;
  for (int s = 0; s <= config.s_max; ++s) {
    const auto shifted = occ.shifted(s);
    const std::size_t valid = ring ? n : n - s;
    const auto mask = occ.range_mask(0, valid);
    const double pairs = static_cast<double>(popcount_and(bits, shifted, mask));
    out[layout.correlation(ti, s)] = pairs / static_cast<double>(valid) - rho * rho;
  }

  const auto before = occ.shifted(-1);
  for (std::size_t gi = 0; gi < gamma_s.size(); ++gi) {
    const int s = gamma_s[gi];
    const auto at_s = occ.shifted(s);
    // Index set where sites i-1, i, i+s all exist.
    const std::size_t lo = ring ? 0 : 1;
    const std::size_t hi = ring ? n : n - s;
    const auto mask = occ.range_mask(lo, hi);

    std::uint64_t phi = 0, p_s = 0, p_next = 0, gamma = 0;
    for (std::size_t w = 0; w < bits.size(); ++w) {
      const std::uint64_t m = mask[w];
      phi += std::popcount(at_s[w] & m);
      p_s += std::popcount(bits[w] & at_s[w] & m);
      // omega_{i-1} omega_{i+s} is the distance s+1 pair.
      p_next += std::popcount(before[w] & at_s[w] & m);
      gamma += std::popcount(~before[w] & ~bits[w] & at_s[w] & m);
    }
    const double denom = static_cast<double>(hi - lo);
    const auto residual = static_cast<std::int64_t>(phi) - static_cast<std::int64_t>(p_next) -
                          static_cast<std::int64_t>(p_s) - static_cast<std::int64_t>(gamma);
    out[layout.gamma(ti, gi, 0)] = static_cast<double>(gamma) / denom;
    out[layout.gamma(ti, gi, 1)] = static_cast<double>(p_s) / denom;
    out[layout.gamma(ti, gi, 2)] = static_cast<double>(p_next) / denom;
    out[layout.gamma(ti, gi, 3)] = static_cast<double>(phi) / denom;
    out[layout.gamma(ti, gi, 4)] = static_cast<double>(residual) / denom;
  }
}

void validate_gamma_s(const SimConfig& config, std::span<const int> gamma_s) {
  for (int s : gamma_s) {
    if (s < 2 || s % 2 != 0)
      throw std::invalid_argument("gamma distance must be an even integer >= 2");
    if (static_cast<std::uint64_t>(s) + 2 >= config.sites / 2)
      throw std::invalid_argument("gamma distance too large for the lattice");
  }
}

}  // namespace

void SimConfig::validate() const {
  if (sites < 1) throw std::invalid_argument("sites must be positive");
  if (boundary == Boundary::ring && sites < 3)
    throw std::invalid_argument("ring lattice needs at least 3 sites");
  if (replicas < 2) throw std::invalid_argument("at least 2 replicas are needed for standard errors");
  if (s_max < 0) throw std::invalid_argument("s_max must be nonnegative");
  if (static_cast<std::uint64_t>(s_max) >= (sites + 1) / 2)
    throw std::invalid_argument("s_max must be below sites/2");
  if (t_grid.empty()) throw std::invalid_argument("t grid is empty");
  for (double t : t_grid) analytic::check_time(t);
}

Estimate summarize(std::span<const double> values) {
  Estimate e;
  e.samples = static_cast<std::uint32_t>(values.size());
  if (values.empty()) return e;
  double sum = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return e;
  double ss = 0.0;
  for (double v : values) ss += (v - e.mean) * (v - e.mean);
  const double n = static_cast<double>(values.size());
  e.std_error = std::sqrt(ss / (n - 1.0) / n);
  return e;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RSA_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

ArrivalField draw_field(std::uint64_t seed, std::uint64_t replica, std::uint64_t sites,
                        Boundary boundary) {
  std::vector<double> times(sites);
  ReplicaStream(seed, replica).fill_uniform(0, sites, times.begin());
  return ArrivalField(std::move(times), boundary);
}

Tables run_observables(const SimConfig& config, std::span<const int> gamma_s) {
  config.validate();
  validate_gamma_s(config, gamma_s);

  const unsigned threads = std::min<unsigned>(resolve_threads(config.threads), config.replicas);
  const double needed = kBytesPerSite * static_cast<double>(config.sites) * threads;
  if (needed > static_cast<double>(config.memory_budget_bytes))
    throw ResourceError("run needs about " + std::to_string(static_cast<std::uint64_t>(needed)) +
                        " bytes, budget is " + std::to_string(config.memory_budget_bytes));

  const Layout layout{config.t_grid.size(), static_cast<std::size_t>(config.s_max) + 1,
                      gamma_s.size()};
  std::vector<std::vector<double>> per_replica(config.replicas,
                                               std::vector<double>(layout.total(), 0.0));

  auto work = [&](unsigned worker) {
    for (std::uint32_t r = worker; r < config.replicas; r += threads) {
      const ArrivalField field = draw_field(config.seed, r, config.sites, config.boundary);
      for (std::size_t ti = 0; ti < config.t_grid.size(); ++ti) {
        const Occupancy occ = simulate::run_parity_fill(field, config.t_grid[ti]);
        measure(occ, config, gamma_s, layout, ti, per_replica[r]);
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  // Aggregate in replica order.
  std::vector<double> column(config.replicas);
  auto estimate = [&](std::size_t slot) {
    for (std::uint32_t r = 0; r < config.replicas; ++r) column[r] = per_replica[r][slot];
    return summarize(column);
  };

  Tables out;
  for (std::size_t ti = 0; ti < config.t_grid.size(); ++ti) {
    const double t = config.t_grid[ti];
    out.density[t] = estimate(layout.density(ti));
    for (int s = 0; s <= config.s_max; ++s)
      out.correlation[{s, t}] = estimate(layout.correlation(ti, s));
    for (std::size_t gi = 0; gi < gamma_s.size(); ++gi) {
      out.gamma[{gamma_s[gi], t}] = GammaEstimates{
          estimate(layout.gamma(ti, gi, 0)), estimate(layout.gamma(ti, gi, 1)),
          estimate(layout.gamma(ti, gi, 2)), estimate(layout.gamma(ti, gi, 3)),
          estimate(layout.gamma(ti, gi, 4))};
    }
  }
  return out;
}

std::map<double, Estimate> run_density_mc(const SimConfig& config) {
  return run_observables(config, {}).density;
}

std::map<CorrelationKey, Estimate> run_correlation_mc(const SimConfig& config) {
  return run_observables(config, {}).correlation;
}

std::map<double, GammaEstimates> run_gamma_mc(const SimConfig& config, int s) {
  const int distances[] = {s};
  const auto tables = run_observables(config, distances);
  std::map<double, GammaEstimates> out;
  for (const auto& [key, value] : tables.gamma) out[key.second] = value;
  return out;
}

}  // namespace rsa::montecarlo
