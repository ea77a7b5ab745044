#pragma once

#include <cstdint>
#include <vector>

#include "rsa/lattice.hpp"

// Two independent ways of turning an arrival field into the configuration at
// time t. Sites are ordered by the key (t_s, s): equal times are broken by the
// lower index attempting first, in both fillers.
namespace rsa::simulate {

/// Maximal strict-descent lengths of the (time, index) keys starting at each
/// site: right[s] counts t_s > t_{s+1} > ..., left[s] counts t_s > t_{s-1} > ...
/// A free lattice edge ends a run.
struct RunLengths {
  std::vector<std::uint32_t> left;
  std::vector<std::uint32_t> right;
};

/// Harris construction: attempts are processed in increasing time order; an
/// attempt succeeds iff both neighbors are vacant at that moment. Sites with
/// t_s > t never attempt. O(N log N).
Occupancy chronological_fill(const ArrivalField& field, double t);

/// Site s is occupied iff t_s <= t and both of its descent runs have even
/// length. One right-to-left and one left-to-right pass, no sorting.
Occupancy run_parity_fill(const ArrivalField& field, double t);

RunLengths compute_runs(const ArrivalField& field);

}  // namespace rsa::simulate
