#pragma once

#include <cstddef>
#include <vector>

#include "iotsdn/types.hpp"

namespace iotsdn {

// Max-min fair (water-filling) split of `budget` across `demands`, real
// valued. Each share is <= its demand and the shares sum to
// min(budget, sum of demands).
std::vector<double> waterfill_real(double budget,
                                   const std::vector<double>& demands);

// Integer variant used by the data-plane queues. Exact: shares sum to
// min(budget, sum of demands); any indivisible remainder goes to the
// lowest-index unsatisfied demands, one unit each.
std::vector<BitsPerSecond> waterfill_int(
    BitsPerSecond budget, const std::vector<BitsPerSecond>& demands);

// One flow competing on every resource it crosses.
struct FillFlow {
  BitsPerSecond demand = 0;
  std::vector<std::size_t> resources;  // indices into the capacity vector
};

// Progressive filling across shared resources: all unfrozen flows grow at
// the same rate until they hit their demand or saturate a resource. Integer
// arithmetic; leftover units are handed out in flow order while capacity
// remains. The result is the max-min fair allocation up to one unit.
std::vector<BitsPerSecond> progressive_fill(
    const std::vector<FillFlow>& flows,
    const std::vector<BitsPerSecond>& capacities);

}  // namespace iotsdn
