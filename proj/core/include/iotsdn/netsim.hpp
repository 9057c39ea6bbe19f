#pragma once

#include <map>
#include <string>
#include <vector>

#include "iotsdn/sdn_controller.hpp"
#include "iotsdn/topology.hpp"
#include "iotsdn/types.hpp"

namespace iotsdn {

enum class RouteKind { Iot, Background };

// One offered traffic slice for a tick: a rate entering the route with a
// single class per path link. `guaranteed` is the reserved part, served
// ahead of fair sharing; anything above it competes for leftover capacity.
struct FlowDemand {
  std::string route;
  BitsPerSecond rate = 0;
  BitsPerSecond guaranteed = 0;
  std::vector<TrafficClass> cls;  // parallel to the route path's links
};

struct LinkReport {
  PerClass<BitsPerSecond> served{};
  PerClass<BitsPerSecond> iot_served{};
  BitsPerSecond total = 0;
  double utilization = 0.0;
};

struct RouteReport {
  BitsPerSecond offered = 0;
  BitsPerSecond delivered = 0;
  Bytes delivered_bytes = 0;
};

struct TickReport {
  Tick tick = 0;
  std::map<LinkId, LinkReport> links;
  std::map<std::string, RouteReport> routes;

  double link_utilization(const LinkId& link) const;
};

// Fluid-flow data plane: three rate-capped egress queues per link, offered
// rates in, served rates out, no propagation delay. A flow's delivered rate
// is a single value along its whole path (no mid-path accumulation), so the
// sharing problem is max-min over all queues at once.
class NetSim {
 public:
  explicit NetSim(const Topology& topology) : topology_(topology) {}

  void register_route(const std::string& id, Path path, RouteKind kind);
  void remove_route(const std::string& id);
  bool has_route(const std::string& id) const;
  const Path& route_path(const std::string& id) const;

  // Per-link per-class caps from the controller; replaced wholesale. Queues
  // of links absent from the map fall back to the link capacity.
  void set_queue_limits(const std::map<LinkId, PerClass<QueueLimit>>& limits);

  // Accumulates offered demands for this tick. Throws UnroutedDemand for
  // unknown routes.
  void offer(const std::vector<FlowDemand>& demands);

  // Serves the accumulated demands and clears them. Queue caps and link
  // capacities are respected exactly; within the shared capacity left after
  // guarantees, rates are split max-min fair.
  TickReport serve(Tick tick, int tick_ms);

 private:
  struct Route {
    Path path;
    RouteKind kind = RouteKind::Iot;
  };

  const Topology& topology_;
  std::map<std::string, Route> routes_;
  std::map<LinkId, PerClass<QueueLimit>> limits_;
  std::vector<FlowDemand> offered_;
};

}  // namespace iotsdn
