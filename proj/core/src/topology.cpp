#include "iotsdn/topology.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "iotsdn/errors.hpp"

namespace iotsdn {

std::string to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Switch:
      return "switch";
    case NodeKind::Aggregator:
      return "aggregator";
    case NodeKind::Consumer:
      return "consumer";
    case NodeKind::TrafficHost:
      return "traffic_host";
  }
  return "?";
}

void Topology::add_node(const Node& node) {
  if (node.id.empty()) {
    throw ValidationError("node id must be nonempty");
  }
  if (nodes_.count(node.id) != 0) {
    throw DuplicateNode("duplicate node id: " + node.id);
  }
  nodes_.emplace(node.id, node);
  out_links_.emplace(node.id, std::vector<LinkId>{});
}

void Topology::add_link(const Link& link) {
  if (link.id.empty()) {
    throw ValidationError("link id must be nonempty");
  }
  if (links_.count(link.id) != 0) {
    throw DuplicateLink("duplicate link id: " + link.id);
  }
  if (nodes_.count(link.src) == 0) {
    throw UnknownEndpoint("link " + link.id + ": unknown node " + link.src);
  }
  if (nodes_.count(link.dst) == 0) {
    throw UnknownEndpoint("link " + link.id + ": unknown node " + link.dst);
  }
  if (link.src == link.dst) {
    throw ValidationError("link " + link.id + ": src and dst must differ");
  }
  if (link.capacity <= 0) {
    throw ValidationError("link " + link.id + ": capacity must be positive");
  }
  links_.emplace(link.id, link);
  auto& out = out_links_[link.src];
  out.insert(std::lower_bound(out.begin(), out.end(), link.id), link.id);
}

bool Topology::has_node(const NodeId& id) const { return nodes_.count(id) != 0; }

const Node& Topology::node(const NodeId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) {
    throw UnknownEndpoint("unknown node: " + id);
  }
  return it->second;
}

bool Topology::has_link(const LinkId& id) const { return links_.count(id) != 0; }

const Link& Topology::link(const LinkId& id) const {
  auto it = links_.find(id);
  if (it == links_.end()) {
    throw UnknownLink("unknown link: " + id);
  }
  return it->second;
}

Path Topology::compute_path(const NodeId& origin,
                            const NodeId& destination) const {
  if (origin == destination) {
    throw ValidationError("path query requires distinct endpoints");
  }
  node(origin);
  node(destination);

  // Breadth-first relaxation keeping, per node, the minimum-hop path with
  // the lexicographically smallest link-id sequence. Graphs are small, so
  // comparing whole sequences is fine.
  constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();
  std::map<NodeId, std::size_t> dist;
  std::map<NodeId, std::vector<LinkId>> best;
  for (const auto& [id, _] : nodes_) {
    dist[id] = kUnreached;
  }
  dist[origin] = 0;
  best[origin] = {};

  std::deque<NodeId> frontier{origin};
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop_front();
    auto out_it = out_links_.find(u);
    if (out_it == out_links_.end()) {
      continue;
    }
    for (const LinkId& lid : out_it->second) {
      const Link& l = links_.at(lid);
      std::vector<LinkId> candidate = best[u];
      candidate.push_back(lid);
      std::size_t hops = dist[u] + 1;
      if (hops < dist[l.dst]) {
        dist[l.dst] = hops;
        best[l.dst] = std::move(candidate);
        frontier.push_back(l.dst);
      } else if (hops == dist[l.dst] && candidate < best[l.dst]) {
        best[l.dst] = std::move(candidate);
        frontier.push_back(l.dst);
      }
    }
  }

  if (dist[destination] == kUnreached) {
    throw NoPath("no path from " + origin + " to " + destination);
  }
  return Path{best[destination]};
}

}  // namespace iotsdn
