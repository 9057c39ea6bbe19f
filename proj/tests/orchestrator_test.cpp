#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "iotsdn/maxmin.hpp"
#include "iotsdn/orchestrator.hpp"

using namespace iotsdn;

namespace {

Topic topic(const std::string& name, const NodeId& home, QosLevel qos) {
  return Topic{name, home, qos, 10'000'000};
}

}  // namespace

TEST_CASE("subscribe forms origin-destination groups") {
  Orchestrator orch;
  const Subscription& sub = orch.subscribe("c1", topic("t1", "ag1", 0));
  CHECK(sub.id == "c1:t1");
  CHECK(sub.qos == 0);
  REQUIRE(orch.groups().count("ag1->c1") == 1);
  CHECK(orch.groups().at("ag1->c1").members == std::vector<std::string>{"c1:t1"});

  orch.subscribe("c1", topic("t2", "ag1", 1));
  CHECK(orch.groups().size() == 1);
  CHECK(orch.groups().at("ag1->c1").members.size() == 2);

  orch.subscribe("c2", topic("t1", "ag1", 0));
  CHECK(orch.groups().size() == 2);
  REQUIRE(orch.groups().count("ag1->c2") == 1);

  CHECK_THROWS_AS(orch.subscribe("c1", topic("t1", "ag1", 0)),
                  DuplicateSubscription);
}

TEST_CASE("unsubscribe dissolves empty groups") {
  Orchestrator orch;
  orch.subscribe("c1", topic("t1", "ag1", 0));
  orch.subscribe("c1", topic("t2", "ag1", 1));
  Subscription gone = orch.unsubscribe("c1", "t1");
  CHECK(gone.id == "c1:t1");
  CHECK(orch.groups().at("ag1->c1").members == std::vector<std::string>{"c1:t2"});
  orch.unsubscribe("c1", "t2");
  CHECK(orch.groups().empty());
  CHECK_THROWS_AS(orch.unsubscribe("c1", "t2"), UnknownSubscription);
}

TEST_CASE("poll_status reports backlog as a rate") {
  Orchestrator orch;
  std::map<NodeId, Aggregator> aggs;
  aggs.emplace("ag1", Aggregator("ag1"));
  aggs.at("ag1").add_topic(topic("t1", "ag1", 0));
  aggs.at("ag1").add_topic(topic("t2", "ag1", 2));
  orch.subscribe("c1", topic("t1", "ag1", 0));
  orch.subscribe("c1", topic("t2", "ag1", 2));
  aggs.at("ag1").attach("t1", "c1:t1");
  aggs.at("ag1").attach("t2", "c1:t2");

  std::map<std::string, BitsPerSecond> empty = orch.poll_status(aggs, 1000);
  CHECK(empty.at("c1:t1") == 0);
  CHECK(empty.at("c1:t2") == 0);

  aggs.at("ag1").ingest("t1", 1'000'000);
  aggs.at("ag1").ingest("t2", 1'000'000);
  std::map<std::string, BitsPerSecond> report = orch.poll_status(aggs, 1000);
  CHECK(report.at("c1:t1") == 8'000'000);
  CHECK(report.at("c1:t2") == 8'000'000);
  CHECK(orch.groups().at("ag1->c1").demand == 16'000'000);

  // The same backlog over a tenth of the epoch is ten times the rate.
  CHECK(orch.poll_status(aggs, 100).at("c1:t1") == 80'000'000);
}

TEST_CASE("plan_group follows strict priority then fair split") {
  using Demand = std::vector<std::pair<QosLevel, double>>;
  CHECK(Orchestrator::plan_group(10, Demand{{0, 4}, {2, 8}}) ==
        std::vector<double>{4, 6});
  CHECK(Orchestrator::plan_group(10, Demand{{0, 12}, {1, 5}}) ==
        std::vector<double>{10, 0});
  CHECK(Orchestrator::plan_group(9, Demand{{1, 6}, {1, 6}}) ==
        std::vector<double>{4.5, 4.5});
  CHECK(Orchestrator::plan_group(0, Demand{{0, 4}}) ==
        std::vector<double>{0});
  CHECK(Orchestrator::plan_group(5, Demand{}).empty());
}

TEST_CASE("plan properties on random instances") {
  std::mt19937 rng(59);
  for (int round = 0; round < 500; ++round) {
    std::size_t n = 1 + rng() % 6;
    std::vector<std::pair<QosLevel, double>> demands(n);
    double total = 0;
    for (auto& [level, demand] : demands) {
      level = static_cast<QosLevel>(rng() % 3);
      demand = static_cast<double>(rng() % 101);
      total += demand;
    }
    double budget = static_cast<double>(rng() % 301);
    std::vector<double> grants = Orchestrator::plan_group(budget, demands);

    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(grants[i] >= -1e-12);
      CHECK(grants[i] <= demands[i].second + 1e-9);
      sum += grants[i];
    }
    CHECK(sum == doctest::Approx(std::min(budget, total)).epsilon(1e-9));

    // Strict dominance: a shorted level leaves nothing for lower levels.
    for (std::size_t i = 0; i < n; ++i) {
      if (grants[i] < demands[i].second - 1e-9) {
        for (std::size_t j = 0; j < n; ++j) {
          if (demands[j].first > demands[i].first) {
            CHECK(grants[j] == doctest::Approx(0.0).epsilon(1e-12));
          }
        }
      }
    }

    // Within one level the split is exactly max-min of the leftover.
    for (QosLevel level = 0; level < kNumQosLevels; ++level) {
      double upper = 0;
      std::vector<double> level_demands;
      std::vector<std::size_t> level_index;
      for (std::size_t i = 0; i < n; ++i) {
        if (demands[i].first < level) {
          upper += grants[i];
        } else if (demands[i].first == level) {
          level_demands.push_back(demands[i].second);
          level_index.push_back(i);
        }
      }
      std::vector<double> expect =
          waterfill_real(std::max(budget - upper, 0.0), level_demands);
      for (std::size_t k = 0; k < level_index.size(); ++k) {
        CHECK(grants[level_index[k]] ==
              doctest::Approx(expect[k]).epsilon(1e-9));
      }
    }

    // Scale invariance of the allocation shape.
    const double factor = 3.75;
    std::vector<std::pair<QosLevel, double>> scaled = demands;
    for (auto& [level, demand] : scaled) {
      demand *= factor;
    }
    std::vector<double> scaled_grants =
        Orchestrator::plan_group(budget * factor, scaled);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(scaled_grants[i] ==
            doctest::Approx(grants[i] * factor).epsilon(1e-9));
    }
  }
}

TEST_CASE("compute_rate_plan splits per group and zero-fills") {
  Orchestrator orch;
  orch.subscribe("c1", topic("t0", "ag1", 0));
  orch.subscribe("c1", topic("t2", "ag1", 2));
  orch.subscribe("c2", topic("u0", "ag2", 1));

  std::map<std::string, BitsPerSecond> demands{
      {"c1:t0", 4}, {"c1:t2", 8}, {"c2:u0", 7}};
  std::map<std::string, BitsPerSecond> budgets{{"ag1->c1", 10}};
  RatePlan plan = orch.compute_rate_plan(demands, budgets, 42);
  CHECK(plan.epoch == 42);
  CHECK(plan.grants.at("c1:t0") == 4.0);
  CHECK(plan.grants.at("c1:t2") == 6.0);
  CHECK(plan.grants.at("c2:u0") == 0.0);  // no budget granted to ag2->c2
}

TEST_CASE("quantize rounds half to even and respects budgets") {
  Orchestrator orch;
  orch.subscribe("c", topic("t1", "ag1", 0));
  orch.subscribe("c", topic("t2", "ag1", 0));
  orch.set_budget("ag1->c", 100);
  RatePlan plan;
  plan.grants = {{"c:t1", 2.5}, {"c:t2", 3.5}};
  std::map<std::string, BitsPerSecond> q = orch.quantize_plan(plan);
  CHECK(q.at("c:t1") == 2);
  CHECK(q.at("c:t2") == 4);
}

TEST_CASE("quantize trims rounding overshoot largest-first") {
  Orchestrator orch;
  for (const char* t : {"t1", "t2", "t3", "t4"}) {
    orch.subscribe("c", topic(t, "ag1", 0));
  }
  orch.set_budget("ag1->c", 3);
  RatePlan plan;
  for (const char* t : {"t1", "t2", "t3", "t4"}) {
    plan.grants[std::string("c:") + t] = 0.75;
  }
  std::map<std::string, BitsPerSecond> q = orch.quantize_plan(plan);
  BitsPerSecond total = 0;
  for (const auto& [id, rate] : q) {
    total += rate;
  }
  CHECK(total == 3);
  CHECK(q.at("c:t1") == 1);
  CHECK(q.at("c:t2") == 1);
  CHECK(q.at("c:t3") == 1);
  CHECK(q.at("c:t4") == 0);  // equal rates, the larger id gives way
}
