#include "iotsdn/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "iotsdn/errors.hpp"

namespace iotsdn {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok.front() == '#') {
      break;
    }
    tokens.push_back(tok);
  }
  return tokens;
}

std::int64_t parse_scaled(const std::string& tok, int line) {
  std::string digits = tok;
  std::int64_t scale = 1;
  if (!digits.empty()) {
    switch (digits.back()) {
      case 'k': scale = 1'000; break;
      case 'M': scale = 1'000'000; break;
      case 'G': scale = 1'000'000'000; break;
      default: break;
    }
    if (scale != 1) {
      digits.pop_back();
    }
  }
  std::int64_t value = 0;
  const char* end = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(digits.data(), end, value);
  if (digits.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(line, "expected a number, got '" + tok + "'");
  }
  return value * scale;
}

std::uint64_t parse_uint(const std::string& tok, int line) {
  std::uint64_t value = 0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (tok.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(line, "expected an unsigned number, got '" + tok + "'");
  }
  return value;
}

double parse_real(const std::string& tok, int line) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "expected a real number, got '" + tok + "'");
  }
  if (used != tok.size()) {
    throw ParseError(line, "expected a real number, got '" + tok + "'");
  }
  return value;
}

NodeKind parse_kind(const std::string& tok, int line) {
  if (tok == "switch") return NodeKind::Switch;
  if (tok == "aggregator") return NodeKind::Aggregator;
  if (tok == "consumer") return NodeKind::Consumer;
  if (tok == "host") return NodeKind::TrafficHost;
  throw ParseError(line, "unknown node kind '" + tok + "'");
}

PerClass<Fraction> parse_fractions(const std::vector<std::string>& tokens,
                                   std::size_t first, int line) {
  PerClass<Fraction> fractions{};
  for (int c = 0; c < kNumTrafficClasses; ++c) {
    fractions[c] = Fraction::from_double(parse_real(tokens[first + c], line));
  }
  return fractions;
}

void check_fractions(const PerClass<Fraction>& fractions,
                     const std::string& what) {
  std::int64_t sum = 0;
  for (int c = 0; c < kNumTrafficClasses; ++c) {
    if (fractions[c].ppm <= 0) {
      throw ValidationError(what + ": class fraction " + std::to_string(c) +
                            " must be positive");
    }
    sum += fractions[c].ppm;
  }
  if (sum > 1'000'000) {
    throw ValidationError(what + ": class fractions sum above 1.0");
  }
}

void expect_tokens(const std::vector<std::string>& tokens, std::size_t n,
                   int line, const std::string& usage) {
  if (tokens.size() != n) {
    throw ParseError(line, "usage: " + usage);
  }
}

struct EventDryRun {
  const Scenario& sc;
  const Topology& topo;
  std::map<NodeId, std::vector<std::string>> topics_by_aggregator;
  std::set<std::string> active_sources;
  std::set<std::pair<NodeId, std::string>> subscribed;

  void check(const EventSpec& ev);
};

void EventDryRun::check(const EventSpec& ev) {
  switch (ev.kind) {
    case EventKind::StartSource:
      if (!active_sources.insert(ev.source).second) {
        throw ValidationError("source " + ev.source + " started twice");
      }
      break;
    case EventKind::StopSource:
      if (active_sources.erase(ev.source) == 0) {
        throw ValidationError("source " + ev.source + " stopped while idle");
      }
      break;
    case EventKind::Subscribe:
      for (const NodeId& agg : ev.aggregators) {
        try {
          topo.compute_path(agg, ev.consumer);
        } catch (const Error& e) {
          throw ValidationError(std::string("subscribe ") + ev.consumer +
                                " <- " + agg + ": " + e.what());
        }
        for (const std::string& topic : topics_by_aggregator[agg]) {
          if (!subscribed.insert({ev.consumer, topic}).second) {
            throw ValidationError(ev.consumer + " already subscribes to " +
                                  topic);
          }
        }
      }
      break;
    case EventKind::Unsubscribe:
      for (const NodeId& agg : ev.aggregators) {
        for (const std::string& topic : topics_by_aggregator[agg]) {
          if (subscribed.erase({ev.consumer, topic}) == 0) {
            throw ValidationError(ev.consumer + " does not subscribe to " +
                                  topic);
          }
        }
      }
      break;
    case EventKind::EndSimulation:
      break;
  }
}

void validate(Scenario& sc) {
  if (!sc.links.empty()) {
    bool configured = false;
    for (int c = 0; c < kNumTrafficClasses; ++c) {
      configured = configured || sc.classes[c].ppm != 0;
    }
    if (!configured) {
      throw ValidationError("no class constraints configured");
    }
    check_fractions(sc.classes, "classes");
  }

  Topology topo;
  try {
    topo = sc.build_topology();
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }

  for (const auto& [link, fractions] : sc.class_overrides) {
    if (!topo.has_link(link)) {
      throw ValidationError("class override for unknown link " + link);
    }
    check_fractions(fractions, "classes " + link);
  }

  auto link_fractions = [&](const LinkId& id) {
    auto it = sc.class_overrides.find(id);
    return it != sc.class_overrides.end() ? it->second : sc.classes;
  };
  std::map<std::string, const ScenarioLink*> cable_first;
  for (const ScenarioLink& sl : sc.links) {
    if (sl.cable.empty()) {
      continue;
    }
    auto [it, fresh] = cable_first.emplace(sl.cable, &sl);
    if (fresh) {
      continue;
    }
    const ScenarioLink& other = *it->second;
    if (other.link.capacity != sl.link.capacity) {
      throw ValidationError("links sharing cable " + sl.cable +
                            " have different capacities");
    }
    if (link_fractions(other.link.id) != link_fractions(sl.link.id)) {
      throw ValidationError("links sharing cable " + sl.cable +
                            " have different class constraints");
    }
  }

  std::set<std::string> topic_names;
  std::map<NodeId, std::vector<std::string>> topics_by_aggregator;
  for (const TopicSpec& t : sc.topics) {
    if (!topic_names.insert(t.name).second) {
      throw ValidationError("duplicate topic " + t.name);
    }
    if (!topo.has_node(t.aggregator) ||
        topo.node(t.aggregator).kind != NodeKind::Aggregator) {
      throw ValidationError("topic " + t.name + ": " + t.aggregator +
                            " is not an aggregator");
    }
    if (t.qos < 0 || t.qos >= kNumQosLevels) {
      throw ValidationError("topic " + t.name + ": qos level out of range");
    }
    if (t.buffer <= 0) {
      throw ValidationError("topic " + t.name + ": buffer must be positive");
    }
    topics_by_aggregator[t.aggregator].push_back(t.name);
  }

  for (const IngestSpec& in : sc.ingests) {
    if (topic_names.count(in.topic) == 0) {
      throw ValidationError("ingest for unknown topic " + in.topic);
    }
    if (in.bytes_per_second < 0) {
      throw ValidationError("ingest rate for " + in.topic +
                            " must be non-negative");
    }
    if (in.from < 0 || in.to <= in.from) {
      throw ValidationError("ingest window for " + in.topic + " is empty");
    }
  }

  std::set<std::string> source_ids;
  for (const SourceSpec& src : sc.sources) {
    if (!source_ids.insert(src.id).second) {
      throw ValidationError("duplicate source " + src.id);
    }
    if (src.rate <= 0) {
      throw ValidationError("source " + src.id + ": rate must be positive");
    }
    try {
      topo.compute_path(src.origin, src.destination);
    } catch (const Error& e) {
      throw ValidationError("source " + src.id + ": " + e.what());
    }
  }

  std::stable_sort(sc.events.begin(), sc.events.end(),
                   [](const EventSpec& a, const EventSpec& b) {
                     return a.tick < b.tick;
                   });
  int ends = 0;
  for (const EventSpec& ev : sc.events) {
    if (ev.tick < 0) {
      throw ValidationError("event tick must be non-negative");
    }
    if (ev.kind == EventKind::EndSimulation) {
      ++ends;
      sc.end_tick = ev.tick;
    }
  }
  if (ends != 1) {
    throw ValidationError("scenario needs exactly one end event");
  }
  for (const EventSpec& ev : sc.events) {
    if (ev.kind == EventKind::EndSimulation) {
      continue;
    }
    if (ev.tick >= sc.end_tick) {
      throw ValidationError("event at tick " + std::to_string(ev.tick) +
                            " never runs: simulation ends at " +
                            std::to_string(sc.end_tick));
    }
    if (ev.kind == EventKind::StartSource || ev.kind == EventKind::StopSource) {
      if (source_ids.count(ev.source) == 0) {
        throw ValidationError("event references unknown source " + ev.source);
      }
    } else {
      if (!topo.has_node(ev.consumer) ||
          topo.node(ev.consumer).kind != NodeKind::Consumer) {
        throw ValidationError("event references " + ev.consumer +
                              ", which is not a consumer");
      }
      for (const NodeId& agg : ev.aggregators) {
        if (!topo.has_node(agg) ||
            topo.node(agg).kind != NodeKind::Aggregator) {
          throw ValidationError("event references " + agg +
                                ", which is not an aggregator");
        }
      }
    }
  }
  EventDryRun dry{sc, topo, std::move(topics_by_aggregator), {}, {}};
  for (const EventSpec& ev : sc.events) {
    dry.check(ev);
  }
}

}  // namespace

Topology Scenario::build_topology() const {
  Topology topo;
  for (const Node& node : nodes) {
    topo.add_node(node);
  }
  for (const ScenarioLink& sl : links) {
    topo.add_link(sl.link);
  }
  return topo;
}

std::map<LinkId, std::string> Scenario::shared_cables() const {
  std::map<LinkId, std::string> cables;
  for (const ScenarioLink& sl : links) {
    if (!sl.cable.empty()) {
      cables[sl.link.id] = sl.cable;
    }
  }
  return cables;
}

const SourceSpec& Scenario::source_spec(const std::string& id) const {
  for (const SourceSpec& src : sources) {
    if (src.id == id) {
      return src;
    }
  }
  throw ValidationError("no source " + id);
}

const TopicSpec& Scenario::topic_spec(const std::string& topic) const {
  for (const TopicSpec& t : topics) {
    if (t.name == topic) {
      return t;
    }
  }
  throw ValidationError("no topic " + topic);
}

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) {
      continue;
    }
    const std::string& directive = tokens[0];
    if (directive == "scenario") {
      expect_tokens(tokens, 2, line_no, "scenario <name>");
      sc.name = tokens[1];
    } else if (directive == "tick-ms") {
      expect_tokens(tokens, 2, line_no, "tick-ms <milliseconds>");
      std::int64_t ms = parse_scaled(tokens[1], line_no);
      if (ms <= 0 || ms > 60'000) {
        throw ParseError(line_no, "tick-ms out of range");
      }
      sc.tick_ms = static_cast<int>(ms);
    } else if (directive == "seed") {
      expect_tokens(tokens, 2, line_no, "seed <value>");
      sc.seed = parse_uint(tokens[1], line_no);
    } else if (directive == "jitter") {
      expect_tokens(tokens, 2, line_no, "jitter <fraction>");
      sc.jitter = parse_real(tokens[1], line_no);
      if (sc.jitter < 0.0 || sc.jitter >= 1.0) {
        throw ParseError(line_no, "jitter must lie in [0, 1)");
      }
    } else if (directive == "node") {
      expect_tokens(tokens, 3, line_no,
                    "node <id> switch|aggregator|consumer|host");
      sc.nodes.push_back(Node{tokens[1], parse_kind(tokens[2], line_no)});
    } else if (directive == "link") {
      if (tokens.size() != 5 && tokens.size() != 7) {
        throw ParseError(line_no,
                         "usage: link <id> <src> <dst> <capacity> "
                         "[shared <cable>]");
      }
      ScenarioLink sl;
      sl.link = Link{tokens[1], tokens[2], tokens[3],
                     parse_scaled(tokens[4], line_no)};
      if (tokens.size() == 7) {
        if (tokens[5] != "shared") {
          throw ParseError(line_no, "expected 'shared', got '" + tokens[5] +
                                        "'");
        }
        sl.cable = tokens[6];
      }
      sc.links.push_back(std::move(sl));
    } else if (directive == "classes") {
      if (tokens.size() == 1 + kNumTrafficClasses) {
        sc.classes = parse_fractions(tokens, 1, line_no);
      } else if (tokens.size() == 2 + kNumTrafficClasses) {
        sc.class_overrides[tokens[1]] = parse_fractions(tokens, 2, line_no);
      } else {
        throw ParseError(line_no, "usage: classes [<link>] <f0> <f1> <f2>");
      }
    } else if (directive == "topic") {
      if (tokens.size() != 5 && tokens.size() != 7) {
        throw ParseError(
            line_no, "usage: topic <name> <aggregator> qos <level> "
                     "[buffer <bytes>]");
      }
      if (tokens[3] != "qos") {
        throw ParseError(line_no, "expected 'qos', got '" + tokens[3] + "'");
      }
      TopicSpec t;
      t.name = tokens[1];
      t.aggregator = tokens[2];
      t.qos = static_cast<QosLevel>(parse_scaled(tokens[4], line_no));
      if (tokens.size() == 7) {
        if (tokens[5] != "buffer") {
          throw ParseError(line_no, "expected 'buffer', got '" + tokens[5] +
                                        "'");
        }
        t.buffer = parse_scaled(tokens[6], line_no);
      }
      sc.topics.push_back(std::move(t));
    } else if (directive == "ingest") {
      if (tokens.size() != 3 && tokens.size() != 5 && tokens.size() != 7) {
        throw ParseError(line_no,
                         "usage: ingest <topic> <bytes-per-second> "
                         "[from <tick>] [to <tick>]");
      }
      IngestSpec ing;
      ing.topic = tokens[1];
      ing.bytes_per_second = parse_scaled(tokens[2], line_no);
      for (std::size_t i = 3; i + 1 < tokens.size(); i += 2) {
        if (tokens[i] == "from") {
          ing.from = parse_scaled(tokens[i + 1], line_no);
        } else if (tokens[i] == "to") {
          ing.to = parse_scaled(tokens[i + 1], line_no);
        } else {
          throw ParseError(line_no, "unexpected token '" + tokens[i] + "'");
        }
      }
      sc.ingests.push_back(std::move(ing));
    } else if (directive == "source") {
      expect_tokens(tokens, 8, line_no,
                    "source <id> <origin> <destination> class <c> rate "
                    "<bits-per-second>");
      if (tokens[4] != "class" || tokens[6] != "rate") {
        throw ParseError(line_no, "usage: source <id> <origin> <destination> "
                                  "class <c> rate <bits-per-second>");
      }
      SourceSpec src;
      src.id = tokens[1];
      src.origin = tokens[2];
      src.destination = tokens[3];
      std::int64_t cls = parse_scaled(tokens[5], line_no);
      if (cls < 0 || cls >= kNumTrafficClasses) {
        throw ParseError(line_no, "traffic class out of range");
      }
      src.cls = tc_from_index(static_cast<int>(cls));
      src.rate = parse_scaled(tokens[7], line_no);
      sc.sources.push_back(std::move(src));
    } else if (directive == "event") {
      if (tokens.size() < 3) {
        throw ParseError(line_no, "usage: event <tick> <kind> ...");
      }
      EventSpec ev;
      ev.tick = parse_scaled(tokens[1], line_no);
      const std::string& kind = tokens[2];
      if (kind == "start" || kind == "stop") {
        expect_tokens(tokens, 4, line_no,
                      "event <tick> start|stop <source>");
        ev.kind = kind == "start" ? EventKind::StartSource
                                  : EventKind::StopSource;
        ev.source = tokens[3];
      } else if (kind == "subscribe" || kind == "unsubscribe") {
        if (tokens.size() < 5) {
          throw ParseError(line_no,
                           "usage: event <tick> subscribe|unsubscribe "
                           "<consumer> <aggregator>...");
        }
        ev.kind = kind == "subscribe" ? EventKind::Subscribe
                                      : EventKind::Unsubscribe;
        ev.consumer = tokens[3];
        ev.aggregators.assign(tokens.begin() + 4, tokens.end());
      } else if (kind == "end") {
        expect_tokens(tokens, 3, line_no, "event <tick> end");
        ev.kind = EventKind::EndSimulation;
      } else {
        throw ParseError(line_no, "unknown event kind '" + kind + "'");
      }
      sc.events.push_back(std::move(ev));
    } else {
      throw ParseError(line_no, "unknown directive '" + directive + "'");
    }
  }
  validate(sc);
  return sc;
}

Scenario load_scenario(const std::string& path_or_name) {
  if (path_or_name == kBuiltinScenarioName) {
    return parse_scenario(paper_poc_text());
  }
  std::ifstream in(path_or_name);
  if (!in) {
    throw Error("cannot read scenario file " + path_or_name);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

const std::string& paper_poc_text() {
  static const std::string text = R"(scenario paper-poc
tick-ms 100

# Two switches joined by one constrained duplex cable; producers on the
# left, consumers and the reverse-traffic host on the right. Access links
# are wide enough never to bind.
node s1 switch
node s2 switch
node ag1 aggregator
node ag2 aggregator
node c1 consumer
node c2 consumer
node t1 host
node t2 host

link ag1:up ag1 s1 1G
link ag2:up ag2 s1 1G
link t1:up t1 s1 1G
link t1:down s1 t1 1G
link core:fwd s1 s2 100M shared core
link core:rev s2 s1 100M shared core
link c1:down s2 c1 1G
link c2:down s2 c2 1G
link t2:up t2 s2 1G
link t2:down s2 t2 1G

classes 0.5 0.3 0.2

topic ag1.q0 ag1 qos 0
topic ag1.q1 ag1 qos 1
topic ag1.q2 ag1 qos 2
topic ag2.q0 ag2 qos 0
topic ag2.q1 ag2 qos 1
topic ag2.q2 ag2 qos 2

# 22 Mb/s of sensor data per topic
ingest ag1.q0 2750k
ingest ag1.q1 2750k
ingest ag1.q2 2750k
ingest ag2.q0 2750k
ingest ag2.q1 2750k
ingest ag2.q2 2750k

source t1.flow t1 t2 class 0 rate 40M
source t2.flow t2 t1 class 1 rate 25M

event 0 start t1.flow
event 50 subscribe c1 ag1 ag2
event 100 subscribe c2 ag1 ag2
event 150 stop t1.flow
event 200 start t2.flow
event 250 stop t2.flow
event 300 end
)";
  return text;
}

}  // namespace iotsdn
