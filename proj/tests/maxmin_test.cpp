#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "iotsdn/maxmin.hpp"

using namespace iotsdn;

namespace {

// Unit-step reference: hand out one unit at a time to the flow with the
// smallest share among those still below demand, ties to the lowest index.
std::vector<BitsPerSecond> unit_oracle(BitsPerSecond budget,
                                       const std::vector<BitsPerSecond>& d) {
  std::vector<BitsPerSecond> share(d.size(), 0);
  while (budget > 0) {
    std::size_t pick = d.size();
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (share[i] < d[i] && (pick == d.size() || share[i] < share[pick])) {
        pick = i;
      }
    }
    if (pick == d.size()) {
      break;
    }
    ++share[pick];
    --budget;
  }
  return share;
}

}  // namespace

TEST_CASE("real waterfill basics") {
  CHECK(waterfill_real(10.0, {}).empty());
  CHECK(waterfill_real(9.0, {6.0, 6.0}) == std::vector<double>{4.5, 4.5});
  CHECK(waterfill_real(8.0, {2.0, 10.0}) == std::vector<double>{2.0, 6.0});
  CHECK(waterfill_real(100.0, {2.0, 10.0}) == std::vector<double>{2.0, 10.0});
  CHECK(waterfill_real(0.0, {2.0, 10.0}) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("real waterfill is max-min fair") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dd(0.0, 100.0);
  for (int round = 0; round < 400; ++round) {
    std::size_t n = 1 + rng() % 6;
    std::vector<double> demands(n);
    for (double& d : demands) {
      d = dd(rng);
    }
    double total = std::accumulate(demands.begin(), demands.end(), 0.0);
    double budget = dd(rng) * 3.0;
    std::vector<double> share = waterfill_real(budget, demands);

    double sum = std::accumulate(share.begin(), share.end(), 0.0);
    CHECK(sum == doctest::Approx(std::min(budget, total)).epsilon(1e-12));
    double level = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(share[i] >= 0.0);
      CHECK(share[i] <= demands[i] + 1e-9);
      level = std::max(level, share[i]);
    }
    // Every unsatisfied flow sits exactly at the water level; satisfied
    // flows hold their full demand below it.
    for (std::size_t i = 0; i < n; ++i) {
      if (share[i] < demands[i] - 1e-9) {
        CHECK(share[i] == doctest::Approx(level).epsilon(1e-9));
      } else {
        CHECK(share[i] == doctest::Approx(demands[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("integer waterfill basics") {
  CHECK(waterfill_int(9, {6, 6}) == std::vector<BitsPerSecond>{5, 4});
  CHECK(waterfill_int(5, {3, 3}) == std::vector<BitsPerSecond>{3, 2});
  CHECK(waterfill_int(50, {60, 20}) == std::vector<BitsPerSecond>{30, 20});
  CHECK(waterfill_int(100, {6, 6}) == std::vector<BitsPerSecond>{6, 6});
  CHECK(waterfill_int(0, {6, 6}) == std::vector<BitsPerSecond>{0, 0});
}

TEST_CASE("integer waterfill matches the unit-step oracle") {
  std::mt19937 rng(11);
  for (int round = 0; round < 600; ++round) {
    std::size_t n = 1 + rng() % 6;
    std::vector<BitsPerSecond> demands(n);
    for (auto& d : demands) {
      d = rng() % 101;
    }
    BitsPerSecond budget = rng() % 501;
    CHECK(waterfill_int(budget, demands) == unit_oracle(budget, demands));
  }
}

TEST_CASE("progressive fill on one resource equals integer waterfill") {
  std::mt19937 rng(13);
  for (int round = 0; round < 400; ++round) {
    std::size_t n = 1 + rng() % 6;
    std::vector<BitsPerSecond> demands(n);
    std::vector<FillFlow> flows(n);
    for (std::size_t i = 0; i < n; ++i) {
      demands[i] = rng() % 101;
      flows[i] = FillFlow{demands[i], {0}};
    }
    BitsPerSecond cap = rng() % 301;
    CHECK(progressive_fill(flows, {cap}) == waterfill_int(cap, demands));
  }
}

TEST_CASE("progressive fill across shared resources") {
  SUBCASE("chain bottleneck") {
    // Flow 0 crosses both resources, flow 1 only the second.
    std::vector<FillFlow> flows{{100, {0, 1}}, {100, {1}}};
    std::vector<BitsPerSecond> result = progressive_fill(flows, {10, 50});
    CHECK(result == std::vector<BitsPerSecond>{10, 40});
  }
  SUBCASE("disjoint flows do not interact") {
    std::vector<FillFlow> flows{{30, {0}}, {30, {1}}};
    CHECK(progressive_fill(flows, {20, 40}) ==
          std::vector<BitsPerSecond>{20, 30});
  }
  SUBCASE("indivisible remainder goes to the earliest flows") {
    std::vector<FillFlow> flows{{10, {0}}, {10, {0}}, {10, {0}}};
    CHECK(progressive_fill(flows, {8}) == std::vector<BitsPerSecond>{3, 3, 2});
  }
}

TEST_CASE("progressive fill properties on random instances") {
  std::mt19937 rng(17);
  for (int round = 0; round < 400; ++round) {
    std::size_t flow_count = 1 + rng() % 6;
    std::size_t resource_count = 1 + rng() % 5;
    std::vector<BitsPerSecond> caps(resource_count);
    for (auto& cap : caps) {
      cap = rng() % 201;
    }
    std::vector<FillFlow> flows(flow_count);
    for (FillFlow& f : flows) {
      f.demand = rng() % 151;
      for (std::size_t r = 0; r < resource_count; ++r) {
        if (rng() % 2 == 0) {
          f.resources.push_back(r);
        }
      }
      if (f.resources.empty()) {
        f.resources.push_back(rng() % resource_count);
      }
    }

    std::vector<BitsPerSecond> alloc = progressive_fill(flows, caps);
    std::vector<BitsPerSecond> used(resource_count, 0);
    for (std::size_t i = 0; i < flow_count; ++i) {
      CHECK(alloc[i] >= 0);
      CHECK(alloc[i] <= flows[i].demand);
      for (std::size_t r : flows[i].resources) {
        used[r] += alloc[i];
      }
    }
    for (std::size_t r = 0; r < resource_count; ++r) {
      CHECK(used[r] <= caps[r]);
    }
    // Maximality: an unsatisfied flow must sit on a saturated resource.
    for (std::size_t i = 0; i < flow_count; ++i) {
      if (alloc[i] == flows[i].demand) {
        continue;
      }
      bool saturated = false;
      for (std::size_t r : flows[i].resources) {
        saturated = saturated || used[r] == caps[r];
      }
      CHECK(saturated);
    }
  }
}
