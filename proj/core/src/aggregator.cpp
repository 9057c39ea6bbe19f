#include "iotsdn/aggregator.hpp"

#include <algorithm>

namespace iotsdn {

TopicStream::TopicStream(Bytes capacity) : capacity_(capacity) {
  if (capacity_ <= 0) {
    throw ValidationError("topic buffer capacity must be positive");
  }
}

void TopicStream::ingest(Bytes bytes) {
  if (bytes < 0) {
    throw ValidationError("ingest byte count must be non-negative");
  }
  ingested_ += bytes;
  Bytes accepted = std::min(bytes, capacity_ - occupancy());
  tail_ += accepted;
  dropped_ += bytes - accepted;
}

void TopicStream::add_reader(const std::string& reader) {
  if (!cursors_.emplace(reader, head_).second) {
    throw DuplicateSubscription("reader " + reader + " already attached");
  }
}

void TopicStream::remove_reader(const std::string& reader) {
  if (cursors_.erase(reader) == 0) {
    throw UnknownSubscription("reader " + reader + " not attached");
  }
  advance_head();
}

bool TopicStream::has_reader(const std::string& reader) const {
  return cursors_.count(reader) != 0;
}

Bytes TopicStream::backlog(const std::string& reader) const {
  auto it = cursors_.find(reader);
  if (it == cursors_.end()) {
    throw UnknownSubscription("reader " + reader + " not attached");
  }
  return tail_ - it->second;
}

void TopicStream::consume(const std::string& reader, Bytes bytes) {
  auto it = cursors_.find(reader);
  if (it == cursors_.end()) {
    throw UnknownSubscription("reader " + reader + " not attached");
  }
  if (bytes < 0 || bytes > tail_ - it->second) {
    throw ValidationError("consume beyond reader backlog");
  }
  it->second += bytes;
  advance_head();
}

void TopicStream::advance_head() {
  if (cursors_.empty()) {
    return;
  }
  Bytes slowest = tail_;
  for (const auto& [_, cursor] : cursors_) {
    slowest = std::min(slowest, cursor);
  }
  head_ = std::max(head_, slowest);
}

void Aggregator::add_topic(const Topic& topic) {
  if (topic.home != id_) {
    throw ForeignTopic("topic " + topic.name + " is homed at " + topic.home +
                       ", not " + id_);
  }
  if (topics_.count(topic.name) != 0) {
    throw ValidationError("topic " + topic.name + " already exists");
  }
  topics_.emplace(topic.name, topic);
  streams_.emplace(topic.name, TopicStream(topic.buffer_capacity));
}

bool Aggregator::has_topic(const std::string& name) const {
  return topics_.count(name) != 0;
}

const Topic& Aggregator::topic(const std::string& name) const {
  auto it = topics_.find(name);
  if (it == topics_.end()) {
    throw UnknownTopic("no topic " + name + " at " + id_);
  }
  return it->second;
}

std::vector<std::string> Aggregator::topic_names() const {
  std::vector<std::string> names;
  names.reserve(topics_.size());
  for (const auto& [name, _] : topics_) {
    names.push_back(name);
  }
  return names;
}

void Aggregator::ingest(const std::string& topic, Bytes bytes) {
  stream_mut(topic).ingest(bytes);
}

void Aggregator::attach(const std::string& topic,
                        const std::string& subscription) {
  stream_mut(topic).add_reader(subscription);
}

void Aggregator::detach(const std::string& topic,
                        const std::string& subscription) {
  stream_mut(topic).remove_reader(subscription);
}

Bytes Aggregator::backlog(const std::string& topic,
                          const std::string& subscription) const {
  return stream(topic).backlog(subscription);
}

void Aggregator::apply_grants(const GrantTable& grants) {
  for (const auto& [key, rate] : grants) {
    if (topics_.count(key.first) == 0) {
      throw ForeignTopic("grant for topic " + key.first + " not homed at " +
                         id_);
    }
    if (rate < 0) {
      throw ValidationError("grant rate must be non-negative");
    }
  }
  grants_ = grants;
}

std::vector<Emission> Aggregator::drain(int tick_ms) {
  if (tick_ms <= 0) {
    throw ValidationError("tick length must be positive");
  }
  std::vector<Emission> out;
  out.reserve(grants_.size());
  for (const auto& [key, rate] : grants_) {
    const auto& [topic, subscription] = key;
    TopicStream& stream = stream_mut(topic);
    if (!stream.has_reader(subscription)) {
      continue;
    }
    Bytes allowance = bytes_per_tick(rate, tick_ms);
    Bytes emitted = std::min(allowance, stream.backlog(subscription));
    stream.consume(subscription, emitted);
    out.push_back(Emission{subscription, topic, emitted});
  }
  return out;
}

const TopicStream& Aggregator::stream(const std::string& topic) const {
  auto it = streams_.find(topic);
  if (it == streams_.end()) {
    throw UnknownTopic("no topic " + topic + " at " + id_);
  }
  return it->second;
}

TopicStream& Aggregator::stream_mut(const std::string& topic) {
  auto it = streams_.find(topic);
  if (it == streams_.end()) {
    throw UnknownTopic("no topic " + topic + " at " + id_);
  }
  return it->second;
}

}  // namespace iotsdn
