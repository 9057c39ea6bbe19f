#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iotsdn/bam.hpp"
#include "iotsdn/orchestrator.hpp"
#include "iotsdn/topology.hpp"
#include "iotsdn/types.hpp"

namespace iotsdn {

// Forwarding entry installed on a switch for one origin-destination match.
struct FlowEntry {
  NodeId sw;
  std::string match;  // route id
  LinkId out_link;
  TrafficClass queue = TrafficClass::Tc0;
};

// One IoT flow group installed on the network.
struct InstalledFlow {
  FlowGroup group;
  Path path;
  // Booked rate per bandwidth resource and class; the per-link view follows
  // from the path (each path link maps to exactly one resource).
  std::map<std::string, PerClass<BitsPerSecond>> slices;
  BitsPerSecond budget = 0;
};

// Non-IoT traffic source admitted natively in its own class and never
// reassigned.
struct InstalledSource {
  std::string id;
  NodeId origin;
  NodeId destination;
  TrafficClass cls = TrafficClass::Tc0;
  BitsPerSecond rate = 0;     // offered rate
  BitsPerSecond reserved = 0; // admitted rate, min(rate, class headroom)
  Path path;
};

struct ClassUsage {
  BitsPerSecond limit = 0;
  BitsPerSecond allocated = 0;
  BitsPerSecond borrowed = 0;
  BitsPerSecond headroom = 0;
};

struct MonitorSample {
  Tick tick = 0;
  std::map<std::string, PerClass<ClassUsage>> resources;
};

// One class move of IoT rate on a resource. `from`/`to` are empty when rate
// appears from or returns to the unallocated pool.
struct Reassignment {
  Tick tick = 0;
  std::string flow;
  std::string resource;
  std::optional<TrafficClass> from;
  std::optional<TrafficClass> to;
  BitsPerSecond rate = 0;
};

// Egress queue cap for one (link, class): total admitted rate plus how much
// of it is borrowed IoT traffic.
struct QueueLimit {
  BitsPerSecond cap = 0;
  BitsPerSecond borrowed = 0;

  friend bool operator==(const QueueLimit&, const QueueLimit&) = default;
};

// A slice of one flow's demand with a single class per path link, aligned
// with the flow's booked slices; the data-plane unit of forwarding.
struct DemandSegment {
  BitsPerSecond rate = 0;
  std::vector<TrafficClass> cls;  // parallel to the path's links
};

// Simulated SDN controller: computes paths, books bandwidth per link and
// class, installs switch entries, and (when integration is enabled) lends
// idle TC1/TC2 capacity to IoT groups, reclaiming it when native traffic
// returns. Directed link pairs declared as one cable share a single ledger.
class SdnController {
 public:
  SdnController(const Topology& topology, bool integrated,
                const PerClass<Fraction>& default_classes,
                const std::map<LinkId, PerClass<Fraction>>& class_overrides,
                const std::map<LinkId, std::string>& shared_cables);

  bool integrated() const { return integrated_; }

  const std::string& resource_of(const LinkId& link) const;

  // The returned reference is invalidated by any setup, teardown, update
  // or rebalance; ledgers are rebuilt whenever bookings change.
  const LinkLedger& ledger(const std::string& resource) const;
  std::vector<std::string> resource_ids() const;

  // IoT flow groups. setup installs the path and immediately allocates;
  // the returned budget may shrink or grow at later rebalances.
  BitsPerSecond setup_flow(const FlowGroup& group);
  void update_flow(const std::string& id, BitsPerSecond demand);
  void teardown_flow(const std::string& id);
  bool has_flow(const std::string& id) const;
  std::vector<std::string> flow_ids() const;
  const InstalledFlow& flow(const std::string& id) const;
  BitsPerSecond budget(const std::string& id) const;

  // Background sources, admitted all-or-partial in their native class.
  BitsPerSecond setup_source(const std::string& id, const NodeId& origin,
                             const NodeId& destination, TrafficClass cls,
                             BitsPerSecond rate);
  void teardown_source(const std::string& id);
  bool has_source(const std::string& id) const;
  const InstalledSource& source(const std::string& id) const;

  MonitorSample monitor(Tick tick) const;

  // Recomputes all allocations (native sources first, then IoT groups with
  // max-min sharing of the per-resource pools) and reports the class moves
  // since the previous rebalance. Non-integrated mode confines IoT to Tc0
  // and therefore never reports moves.
  std::vector<Reassignment> rebalance(Tick tick);

  std::map<LinkId, PerClass<QueueLimit>> apply_queue_limits() const;

  // Splits `rate` of a flow's traffic into single-class-per-link segments
  // following the booked slice decomposition. rate must not exceed the
  // flow's budget.
  std::vector<DemandSegment> segment_demand(const std::string& id,
                                            BitsPerSecond rate) const;

  const std::map<std::pair<NodeId, std::string>, FlowEntry>& flow_entries()
      const {
    return entries_;
  }

 private:
  const Topology& topology_;
  bool integrated_ = false;
  std::map<LinkId, PerClass<Fraction>> link_classes_;
  std::map<LinkId, std::string> resource_by_link_;
  std::map<std::string, BitsPerSecond> resource_capacity_;
  std::map<std::string, PerClass<Fraction>> resource_classes_;

  std::map<std::string, LinkLedger> ledgers_;
  std::map<std::string, InstalledFlow> flows_;
  std::map<std::string, InstalledSource> sources_;
  std::vector<std::string> source_order_;  // admission priority, arrival order
  std::map<std::pair<NodeId, std::string>, FlowEntry> entries_;
  // Slice state at the end of the previous rebalance, for the move log.
  std::map<std::string, std::map<std::string, PerClass<BitsPerSecond>>>
      logged_slices_;

  void rebuild_ledgers();
  void recompute();
  void install_entries(const std::string& match, const Path& path,
                       TrafficClass queue);
  void remove_entries(const std::string& match);
  std::vector<std::string> path_resources(const Path& path) const;
};

}  // namespace iotsdn
