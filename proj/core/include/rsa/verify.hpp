#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// The cross-check suite behind `rsa verify`: analytic identities, simulator
// properties, the exact oracle and (at the full level) Monte Carlo agreement.
namespace rsa::verify {

enum class Level { quick, full };

struct Options {
  Level level = Level::quick;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::uint64_t mc_sites = 1'000'000;
  std::uint32_t mc_replicas = 32;
  // Test hook: perturbs the reference constant of the named check so the
  // suite's ability to fail can itself be tested.
  std::optional<std::string> corrupt;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double error = 0.0;      // worst observed discrepancy (or violation count)
  double tolerance = 0.0;
  std::string detail;
};

std::vector<std::string> check_names(Level level);

// Throws std::invalid_argument if `corrupt` names no check at this level.
std::vector<CheckResult> run(const Options& options);

}  // namespace rsa::verify
