#include "iotsdn/maxmin.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace iotsdn {

std::vector<double> waterfill_real(double budget,
                                   const std::vector<double>& demands) {
  std::vector<double> shares(demands.size(), 0.0);
  if (demands.empty() || budget <= 0.0) {
    return shares;
  }
  // Process demands in ascending order; everyone still unsatisfied gets an
  // equal split of what remains.
  std::vector<std::size_t> order(demands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return demands[a] < demands[b];
  });
  double remaining = budget;
  std::size_t left = demands.size();
  for (std::size_t idx : order) {
    double fair = remaining / static_cast<double>(left);
    double grant = std::min(std::max(demands[idx], 0.0), fair);
    shares[idx] = grant;
    remaining -= grant;
    --left;
  }
  return shares;
}

std::vector<BitsPerSecond> waterfill_int(
    BitsPerSecond budget, const std::vector<BitsPerSecond>& demands) {
  std::vector<BitsPerSecond> shares(demands.size(), 0);
  if (demands.empty() || budget <= 0) {
    return shares;
  }
  // Largest integer water level whose fill fits the budget; the leftover
  // units (fewer than the number of still-unsatisfied demands) go to the
  // lowest-index unsatisfied demands, one unit each.
  BitsPerSecond lo = 0;
  BitsPerSecond hi = 0;
  for (BitsPerSecond d : demands) {
    hi = std::max(hi, d);
  }
  auto fill_at = [&](BitsPerSecond level) {
    BitsPerSecond total = 0;
    for (BitsPerSecond d : demands) {
      total += std::min(std::max<BitsPerSecond>(d, 0), level);
    }
    return total;
  };
  while (lo < hi) {
    BitsPerSecond mid = lo + (hi - lo + 1) / 2;
    if (fill_at(mid) <= budget) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  BitsPerSecond used = 0;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    shares[i] = std::min(std::max<BitsPerSecond>(demands[i], 0), lo);
    used += shares[i];
  }
  BitsPerSecond remainder = budget - used;
  for (std::size_t i = 0; i < demands.size() && remainder > 0; ++i) {
    if (shares[i] < demands[i]) {
      ++shares[i];
      --remainder;
    }
  }
  return shares;
}

std::vector<BitsPerSecond> progressive_fill(
    const std::vector<FillFlow>& flows,
    const std::vector<BitsPerSecond>& capacities) {
  std::vector<BitsPerSecond> alloc(flows.size(), 0);
  std::vector<BitsPerSecond> residual = capacities;

  auto path_residual = [&](const FillFlow& f) {
    BitsPerSecond m = std::numeric_limits<BitsPerSecond>::max();
    for (std::size_t r : f.resources) {
      m = std::min(m, residual[r]);
    }
    return m;
  };

  while (true) {
    // Flows that still want more and can still be routed.
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < flows.size(); ++i) {
      if (alloc[i] < flows[i].demand && path_residual(flows[i]) > 0) {
        active.push_back(i);
      }
    }
    if (active.empty()) {
      break;
    }

    std::vector<std::size_t> contenders(capacities.size(), 0);
    for (std::size_t i : active) {
      for (std::size_t r : flows[i].resources) {
        ++contenders[r];
      }
    }

    BitsPerSecond step = std::numeric_limits<BitsPerSecond>::max();
    for (std::size_t i : active) {
      step = std::min(step, flows[i].demand - alloc[i]);
    }
    for (std::size_t r = 0; r < capacities.size(); ++r) {
      if (contenders[r] > 0) {
        step = std::min(step,
                        residual[r] / static_cast<BitsPerSecond>(contenders[r]));
      }
    }

    if (step > 0) {
      for (std::size_t i : active) {
        alloc[i] += step;
        for (std::size_t r : flows[i].resources) {
          residual[r] -= step;
        }
      }
      continue;
    }

    // Remainder phase: hand out single units in flow order while the flow's
    // whole path still has room.
    bool progressed = false;
    for (std::size_t i : active) {
      if (alloc[i] < flows[i].demand && path_residual(flows[i]) >= 1) {
        alloc[i] += 1;
        for (std::size_t r : flows[i].resources) {
          residual[r] -= 1;
        }
        progressed = true;
      }
    }
    if (!progressed) {
      break;
    }
  }
  return alloc;
}

}  // namespace iotsdn
