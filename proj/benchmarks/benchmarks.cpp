#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "iotsdn/bam.hpp"
#include "iotsdn/engine.hpp"
#include "iotsdn/maxmin.hpp"
#include "iotsdn/orchestrator.hpp"
#include "iotsdn/scenario.hpp"

namespace {

using namespace iotsdn;

std::vector<BitsPerSecond> random_demands(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<BitsPerSecond> demands(n);
  for (BitsPerSecond& d : demands) {
    d = static_cast<BitsPerSecond>(rng() % 100'000'000);
  }
  return demands;
}

void BM_WaterfillInt(benchmark::State& state) {
  auto demands = random_demands(static_cast<std::size_t>(state.range(0)), 1);
  BitsPerSecond budget = 0;
  for (BitsPerSecond d : demands) {
    budget += d / 2;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(waterfill_int(budget, demands));
  }
}
BENCHMARK(BM_WaterfillInt)->Arg(8)->Arg(64)->Arg(512);

void BM_ProgressiveFill(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::size_t flows = static_cast<std::size_t>(state.range(0));
  std::size_t links = 16;
  std::vector<BitsPerSecond> caps(links);
  for (BitsPerSecond& c : caps) {
    c = static_cast<BitsPerSecond>(10'000'000 + rng() % 90'000'000);
  }
  std::vector<FillFlow> fill(flows);
  for (FillFlow& f : fill) {
    f.demand = static_cast<BitsPerSecond>(rng() % 50'000'000);
    std::size_t s = rng() % links;
    std::size_t e = s + 1 + rng() % (links - s);
    for (std::size_t i = s; i < e; ++i) {
      f.resources.push_back(i);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(progressive_fill(fill, caps));
  }
}
BENCHMARK(BM_ProgressiveFill)->Arg(8)->Arg(64);

void BM_LedgerChurn(benchmark::State& state) {
  const PerClass<Fraction> fractions = {Fraction{500'000}, Fraction{300'000},
                                        Fraction{200'000}};
  std::vector<std::string> ids;
  for (int i = 0; i < 32; ++i) {
    ids.push_back("flow" + std::to_string(i));
  }
  for (auto _ : state) {
    LinkLedger ledger("link", 1'000'000'000, fractions);
    for (int i = 0; i < 32; ++i) {
      benchmark::DoNotOptimize(
          ledger.admit(ids[static_cast<std::size_t>(i)],
                       tc_from_index(i % 3), 1'000'000 + i));
    }
    for (int i = 0; i < 32; ++i) {
      ledger.release(ids[static_cast<std::size_t>(i)]);
    }
  }
}
BENCHMARK(BM_LedgerChurn);

void BM_PlanGroup(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::vector<std::pair<QosLevel, double>> demands;
  for (int i = 0; i < 24; ++i) {
    demands.emplace_back(static_cast<QosLevel>(rng() % 3),
                         static_cast<double>(rng() % 1000));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(Orchestrator::plan_group(5000.0, demands));
  }
}
BENCHMARK(BM_PlanGroup);

void BM_ParseScenario(benchmark::State& state) {
  const std::string& text = paper_poc_text();
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_scenario(text));
  }
}
BENCHMARK(BM_ParseScenario)->Unit(benchmark::kMicrosecond);

void BM_PocRun(benchmark::State& state) {
  Scenario scenario = load_scenario(kBuiltinScenarioName);
  RunOptions options;
  options.integrated = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(scenario, options));
  }
}
BENCHMARK(BM_PocRun)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
