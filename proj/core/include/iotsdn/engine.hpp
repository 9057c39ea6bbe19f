#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iotsdn/netsim.hpp"
#include "iotsdn/scenario.hpp"
#include "iotsdn/sdn_controller.hpp"

namespace iotsdn {

struct RunOptions {
  bool integrated = true;
  std::optional<int> tick_ms;
  std::optional<std::uint64_t> seed;
  bool record_trace = false;
};

struct TopicAccount {
  Bytes ingested = 0;
  Bytes dropped = 0;
  Bytes occupancy = 0;
  Bytes released = 0;
};

// Everything observable about one tick, kept only when tracing is on.
struct TickTrace {
  Tick tick = 0;
  std::map<LinkId, LinkReport> links;
  std::map<std::string, PerClass<ClassUsage>> resources;  // after rebalance
  std::vector<Reassignment> reassignments;
  std::map<std::string, BitsPerSecond> source_offered;
  std::map<std::string, BitsPerSecond> source_delivered;
  std::map<std::string, BitsPerSecond> grants;
  std::map<std::string, Bytes> delivered;
  std::map<std::string, Bytes> delivered_total;  // cumulative per subscription
  std::map<std::string, TopicAccount> topics;
};

struct LinkSummary {
  double average = 0.0;
  double peak = 0.0;
};

struct RunSummary {
  std::string scenario;
  bool integrated = true;
  Tick ticks = 0;
  int tick_ms = 100;
  std::uint64_t seed = 0;
  std::map<LinkId, LinkSummary> links;
  std::map<std::string, Bytes> delivered;  // total bytes per subscription
};

struct RunResult {
  RunSummary summary;
  std::vector<TickTrace> trace;
};

class MetricsSink {
 public:
  virtual ~MetricsSink() = default;
  virtual void on_tick(const TickReport& report,
                       const std::map<std::string, BitsPerSecond>& grants,
                       const std::map<std::string, Bytes>& delivered) = 0;
};

// Writes links.csv and subscriptions.csv under `dir`. Rates are integer
// bits/s, utilization has 6 decimal places, lines end with '\n'.
class CsvSink : public MetricsSink {
 public:
  explicit CsvSink(const std::filesystem::path& dir);

  void on_tick(const TickReport& report,
               const std::map<std::string, BitsPerSecond>& grants,
               const std::map<std::string, Bytes>& delivered) override;

 private:
  std::ofstream links_;
  std::ofstream subs_;
};

RunResult run(const Scenario& scenario, const RunOptions& options = {},
              MetricsSink* sink = nullptr);

std::string format_summary(const RunSummary& summary);
void write_summary(const std::filesystem::path& file,
                   const RunSummary& summary);

// Integrated and non-integrated runs of the same scenario and seed, with
// the per-tick utilization series side by side.
struct CompareResult {
  RunSummary integrated;
  RunSummary non_integrated;
  std::map<LinkId, std::vector<std::pair<double, double>>> utilization;
};

CompareResult compare(const Scenario& scenario, const RunOptions& base = {});

std::string format_compare(const CompareResult& result);
void write_compare_csv(const std::filesystem::path& file,
                       const CompareResult& result);

}  // namespace iotsdn
