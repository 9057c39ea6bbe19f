#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "iotsdn/topology.hpp"
#include "iotsdn/types.hpp"

namespace iotsdn {

inline constexpr Bytes kDefaultTopicBuffer = 10'000'000;

struct TopicSpec {
  std::string name;
  NodeId aggregator;
  QosLevel qos = 0;
  Bytes buffer = kDefaultTopicBuffer;
};

// Synthetic sensor data feeding one topic, active on [from, to).
struct IngestSpec {
  std::string topic;
  Bytes bytes_per_second = 0;
  Tick from = 0;
  Tick to = kForever;
};

// Background (non-IoT) traffic host pair with a fixed class and rate.
struct SourceSpec {
  std::string id;
  NodeId origin;
  NodeId destination;
  TrafficClass cls = TrafficClass::Tc0;
  BitsPerSecond rate = 0;
};

enum class EventKind {
  StartSource,
  StopSource,
  Subscribe,
  Unsubscribe,
  EndSimulation
};

struct EventSpec {
  Tick tick = 0;
  EventKind kind = EventKind::EndSimulation;
  std::string source;               // start/stop
  NodeId consumer;                  // subscribe/unsubscribe
  std::vector<NodeId> aggregators;  // subscribe/unsubscribe
};

struct ScenarioLink {
  Link link;
  std::string cable;  // empty: the link is its own bandwidth resource
};

// A fully validated simulation input: topology, class constraints, topics
// and their ingest feeds, background sources, and the timed event list.
struct Scenario {
  std::string name = "unnamed";
  int tick_ms = 100;
  std::uint64_t seed = 0;
  double jitter = 0.0;  // +-fraction of uniform ingest noise, 0 = off
  std::vector<Node> nodes;
  std::vector<ScenarioLink> links;
  PerClass<Fraction> classes{};
  std::map<LinkId, PerClass<Fraction>> class_overrides;
  std::vector<TopicSpec> topics;
  std::vector<IngestSpec> ingests;
  std::vector<SourceSpec> sources;
  std::vector<EventSpec> events;  // sorted by (tick, declaration order)
  Tick end_tick = 0;              // exclusive; ticks run 0 .. end_tick-1

  Topology build_topology() const;
  std::map<LinkId, std::string> shared_cables() const;
  const SourceSpec& source_spec(const std::string& id) const;
  const TopicSpec& topic_spec(const std::string& topic) const;
};

inline constexpr const char* kBuiltinScenarioName = "paper-poc";

// Parses and validates a scenario document. Syntax problems raise
// ParseError with the line number; dangling references, bad fractions and
// inconsistent event sequences raise ValidationError.
Scenario parse_scenario(const std::string& text);

// Loads a scenario from a file path, or the built-in document when the
// argument equals kBuiltinScenarioName.
Scenario load_scenario(const std::string& path_or_name);

// The built-in two-switch proof-of-concept scenario document.
const std::string& paper_poc_text();

}  // namespace iotsdn
