#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rsa/lattice.hpp"

// Replica-parallel Monte Carlo estimates on large lattices.
//
// Each replica draws one arrival field from its own Philox4x32-10 stream keyed
// by (seed, replica index), so results depend only on the configuration and
// never on the number of threads. Standard errors are taken across replicas:
// sites within one lattice are correlated and do not give honest error bars.
namespace rsa::montecarlo {

/// Thrown when a run would exceed SimConfig::memory_budget_bytes.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimConfig {
  std::uint64_t sites = 1'000'000;
  std::uint32_t replicas = 32;
  std::uint64_t seed = 42;
  std::vector<double> t_grid{0.25, 0.5, 0.75, 1.0};
  int s_max = 4;
  Boundary boundary = Boundary::ring;
  // 0 means: RSA_THREADS from the environment, else hardware concurrency.
  unsigned threads = 0;
  std::uint64_t memory_budget_bytes = std::uint64_t{4} << 30;

  // Throws std::invalid_argument.
  void validate() const;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint32_t samples = 0;

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// Mean and standard error of the mean of i.i.d. replica values.
Estimate summarize(std::span<const double> replica_values);

/// Estimates around the event {omega_{-1} = omega_0 = 0, omega_s = 1}. The four
/// probabilities come from the same translation-averaged index set, so
/// `residual` = phi - p_next - p_s - gamma vanishes replica by replica.
struct GammaEstimates {
  Estimate gamma;   // P(omega_{-1} = omega_0 = 0, omega_s = 1)
  Estimate p_s;     // P(omega_0 = omega_s = 1)
  Estimate p_next;  // P(omega_0 = omega_{s+1} = 1)
  Estimate phi;     // P(omega_s = 1)
  Estimate residual;

  friend bool operator==(const GammaEstimates&, const GammaEstimates&) = default;
};

using CorrelationKey = std::pair<int, double>;  // (s, t)
using GammaKey = std::pair<int, double>;        // (s, t)

struct Tables {
  std::map<double, Estimate> density;
  std::map<CorrelationKey, Estimate> correlation;
  std::map<GammaKey, GammaEstimates> gamma;

  friend bool operator==(const Tables&, const Tables&) = default;
};

/// Thread count actually used for a request of `requested` (0 = automatic).
unsigned resolve_threads(unsigned requested);

/// Arrival field of replica `replica`: site i gets element i of the stream.
ArrivalField draw_field(std::uint64_t seed, std::uint64_t replica, std::uint64_t sites,
                        Boundary boundary);

/// Density, correlations C_0..C_{s_max}, and gamma estimates for each even s
/// in `gamma_s`, all from one pass over the replicas.
Tables run_observables(const SimConfig& config, std::span<const int> gamma_s);

std::map<double, Estimate> run_density_mc(const SimConfig& config);
std::map<CorrelationKey, Estimate> run_correlation_mc(const SimConfig& config);
std::map<double, GammaEstimates> run_gamma_mc(const SimConfig& config, int s);

}  // namespace rsa::montecarlo
