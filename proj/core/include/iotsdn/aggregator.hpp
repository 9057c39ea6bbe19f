#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "iotsdn/errors.hpp"
#include "iotsdn/topology.hpp"
#include "iotsdn/types.hpp"

namespace iotsdn {

// Named IoT data stream buffered at its home aggregator. The QoS level is
// static for the topic's whole lifetime.
struct Topic {
  std::string name;
  NodeId home;
  QosLevel qos = 0;
  Bytes buffer_capacity = 0;
};

// Drop-tail byte buffer with independent read cursors per subscription.
// Offsets are cumulative byte counts since creation; a new reader starts at
// the oldest byte still retained. Bytes are retired once every reader has
// consumed them.
class TopicStream {
 public:
  explicit TopicStream(Bytes capacity);

  void ingest(Bytes bytes);

  void add_reader(const std::string& reader);
  void remove_reader(const std::string& reader);
  bool has_reader(const std::string& reader) const;

  Bytes backlog(const std::string& reader) const;
  void consume(const std::string& reader, Bytes bytes);

  Bytes capacity() const { return capacity_; }
  Bytes occupancy() const { return tail_ - head_; }
  Bytes ingested() const { return ingested_; }
  Bytes dropped() const { return dropped_; }
  // Bytes every reader has consumed and the buffer has retired.
  Bytes released() const { return head_; }

 private:
  Bytes capacity_ = 0;
  Bytes head_ = 0;  // oldest retained offset
  Bytes tail_ = 0;  // next write offset
  Bytes ingested_ = 0;
  Bytes dropped_ = 0;
  std::map<std::string, Bytes> cursors_;

  void advance_head();
};

// Grant rates in bits/s keyed by (topic, subscription).
using GrantTable = std::map<std::pair<std::string, std::string>, BitsPerSecond>;

struct Emission {
  std::string subscription;
  std::string topic;
  Bytes bytes = 0;
};

// An IoT gateway aggregation point: buffers per-topic sensor data and emits
// it per subscription at orchestrator-granted rates.
class Aggregator {
 public:
  explicit Aggregator(NodeId id) : id_(std::move(id)) {}

  const NodeId& id() const { return id_; }

  void add_topic(const Topic& topic);
  bool has_topic(const std::string& name) const;
  const Topic& topic(const std::string& name) const;
  std::vector<std::string> topic_names() const;

  void ingest(const std::string& topic, Bytes bytes);

  // Registers / removes a subscription as a reader of a topic buffer.
  void attach(const std::string& topic, const std::string& subscription);
  void detach(const std::string& topic, const std::string& subscription);

  Bytes backlog(const std::string& topic, const std::string& subscription) const;

  // Replaces the grant table wholesale; topics must be homed here.
  void apply_grants(const GrantTable& grants);

  // Emits min(granted rate over the tick, reader backlog) bytes for every
  // granted (topic, subscription) pair, advancing the read cursors.
  std::vector<Emission> drain(int tick_ms);

  const TopicStream& stream(const std::string& topic) const;

 private:
  NodeId id_;
  std::map<std::string, Topic> topics_;
  std::map<std::string, TopicStream> streams_;
  GrantTable grants_;

  TopicStream& stream_mut(const std::string& topic);
};

}  // namespace iotsdn
