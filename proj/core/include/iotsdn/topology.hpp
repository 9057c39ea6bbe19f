#pragma once

#include <map>
#include <string>
#include <vector>

#include "iotsdn/types.hpp"

namespace iotsdn {

using NodeId = std::string;
using LinkId = std::string;

enum class NodeKind { Switch, Aggregator, Consumer, TrafficHost };

std::string to_string(NodeKind kind);

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::Switch;
};

// Directed link; an undirected cable is represented as two Link records.
struct Link {
  LinkId id;
  NodeId src;
  NodeId dst;
  BitsPerSecond capacity = 0;
};

// Ordered list of link ids forming a simple path.
struct Path {
  std::vector<LinkId> links;

  bool empty() const { return links.empty(); }
  std::size_t hops() const { return links.size(); }

  friend bool operator==(const Path&, const Path&) = default;
};

// The network graph. Mutable only while a scenario is being constructed;
// afterwards it is read-only and safe to share across threads.
class Topology {
 public:
  // Throws DuplicateNode if the id is already present.
  void add_node(const Node& node);

  // Throws UnknownEndpoint / DuplicateLink; requires capacity > 0 and
  // src != dst.
  void add_link(const Link& link);

  bool has_node(const NodeId& id) const;
  const Node& node(const NodeId& id) const;
  bool has_link(const LinkId& id) const;
  const Link& link(const LinkId& id) const;

  const std::map<NodeId, Node>& nodes() const { return nodes_; }
  const std::map<LinkId, Link>& links() const { return links_; }

  // Minimum-hop simple path from origin to destination; ties are broken by
  // lexicographic comparison of the link-id sequence. Pure function of the
  // topology. Throws NoPath when the pair is disconnected.
  Path compute_path(const NodeId& origin, const NodeId& destination) const;

 private:
  std::map<NodeId, Node> nodes_;
  std::map<LinkId, Link> links_;
  // Outgoing links per node, kept sorted by link id.
  std::map<NodeId, std::vector<LinkId>> out_links_;
};

}  // namespace iotsdn
