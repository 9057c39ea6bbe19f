#include "iotsdn/netsim.hpp"

#include <algorithm>
#include <utility>

#include "iotsdn/maxmin.hpp"

namespace iotsdn {

double TickReport::link_utilization(const LinkId& link) const {
  auto it = links.find(link);
  if (it == links.end()) {
    throw UnknownLink("no link " + link + " in report");
  }
  return it->second.utilization;
}

void NetSim::register_route(const std::string& id, Path path, RouteKind kind) {
  if (id.empty()) {
    throw ValidationError("route id must be nonempty");
  }
  if (routes_.count(id) != 0) {
    throw ValidationError("route " + id + " already registered");
  }
  for (const LinkId& link : path.links) {
    if (!topology_.has_link(link)) {
      throw UnknownLink("route " + id + " uses unknown link " + link);
    }
  }
  routes_.emplace(id, Route{std::move(path), kind});
}

void NetSim::remove_route(const std::string& id) {
  if (routes_.erase(id) == 0) {
    throw UnroutedDemand("no route " + id);
  }
}

bool NetSim::has_route(const std::string& id) const {
  return routes_.count(id) != 0;
}

const Path& NetSim::route_path(const std::string& id) const {
  auto it = routes_.find(id);
  if (it == routes_.end()) {
    throw UnroutedDemand("no route " + id);
  }
  return it->second.path;
}

void NetSim::set_queue_limits(
    const std::map<LinkId, PerClass<QueueLimit>>& limits) {
  for (const auto& [link, _] : limits) {
    if (!topology_.has_link(link)) {
      throw UnknownLink("queue limit for unknown link " + link);
    }
  }
  limits_ = limits;
}

void NetSim::offer(const std::vector<FlowDemand>& demands) {
  for (const FlowDemand& demand : demands) {
    auto it = routes_.find(demand.route);
    if (it == routes_.end()) {
      throw UnroutedDemand("demand on unknown route " + demand.route);
    }
    if (demand.cls.size() != it->second.path.links.size()) {
      throw ValidationError("demand on route " + demand.route +
                            " has wrong class vector length");
    }
    if (demand.rate < 0 || demand.guaranteed < 0) {
      throw ValidationError("demand rates must be non-negative");
    }
    if (demand.rate > 0) {
      offered_.push_back(demand);
    }
  }
}

TickReport NetSim::serve(Tick tick, int tick_ms) {
  if (tick_ms <= 0) {
    throw ValidationError("tick length must be positive");
  }
  TickReport report;
  report.tick = tick;
  for (const auto& [lid, link] : topology_.links()) {
    LinkReport row;
    row.utilization = 0.0;
    report.links.emplace(lid, row);
  }
  for (const auto& [rid, _] : routes_) {
    report.routes.emplace(rid, RouteReport{});
  }

  // Resources: one per touched (link, class) queue plus one per touched
  // link, so per-class caps and the link capacity both bind exactly.
  std::map<std::pair<LinkId, int>, std::size_t> queue_index;
  std::map<LinkId, std::size_t> link_index;
  std::vector<BitsPerSecond> caps;
  auto queue_cap = [&](const LinkId& link, int c) {
    auto it = limits_.find(link);
    if (it == limits_.end()) {
      return topology_.link(link).capacity;
    }
    return it->second[c].cap;
  };
  for (const FlowDemand& demand : offered_) {
    const Route& route = routes_.at(demand.route);
    for (std::size_t i = 0; i < route.path.links.size(); ++i) {
      const LinkId& link = route.path.links[i];
      int c = tc_index(demand.cls[i]);
      if (queue_index.emplace(std::make_pair(link, c), caps.size()).second) {
        caps.push_back(queue_cap(link, c));
      }
      if (link_index.emplace(link, caps.size()).second) {
        caps.push_back(topology_.link(link).capacity);
      }
    }
  }

  // Guaranteed parts come off the caps first; the rest is shared max-min.
  std::vector<BitsPerSecond> granted(offered_.size(), 0);
  for (std::size_t f = 0; f < offered_.size(); ++f) {
    const FlowDemand& demand = offered_[f];
    granted[f] = std::min(demand.rate, demand.guaranteed);
    if (granted[f] == 0) {
      continue;
    }
    const Route& route = routes_.at(demand.route);
    for (std::size_t i = 0; i < route.path.links.size(); ++i) {
      const LinkId& link = route.path.links[i];
      std::size_t qi = queue_index.at({link, tc_index(demand.cls[i])});
      std::size_t li = link_index.at(link);
      caps[qi] -= granted[f];
      caps[li] -= granted[f];
      if (caps[qi] < 0 || caps[li] < 0) {
        throw ValidationError("guaranteed rates exceed queue cap on " + link);
      }
    }
  }
  std::vector<FillFlow> fill(offered_.size());
  for (std::size_t f = 0; f < offered_.size(); ++f) {
    const FlowDemand& demand = offered_[f];
    fill[f].demand = demand.rate - granted[f];
    const Route& route = routes_.at(demand.route);
    for (std::size_t i = 0; i < route.path.links.size(); ++i) {
      const LinkId& link = route.path.links[i];
      fill[f].resources.push_back(
          queue_index.at({link, tc_index(demand.cls[i])}));
      fill[f].resources.push_back(link_index.at(link));
    }
  }
  std::vector<BitsPerSecond> extra = progressive_fill(fill, caps);

  for (std::size_t f = 0; f < offered_.size(); ++f) {
    const FlowDemand& demand = offered_[f];
    BitsPerSecond served = granted[f] + extra[f];
    const Route& route = routes_.at(demand.route);
    for (std::size_t i = 0; i < route.path.links.size(); ++i) {
      LinkReport& row = report.links.at(route.path.links[i]);
      int c = tc_index(demand.cls[i]);
      row.served[c] += served;
      if (route.kind == RouteKind::Iot) {
        row.iot_served[c] += served;
      }
    }
    RouteReport& rr = report.routes.at(demand.route);
    rr.offered += demand.rate;
    rr.delivered += served;
  }
  for (auto& [lid, row] : report.links) {
    row.total = row.served[0] + row.served[1] + row.served[2];
    row.utilization = static_cast<double>(row.total) /
                      static_cast<double>(topology_.link(lid).capacity);
  }
  for (auto& [rid, rr] : report.routes) {
    rr.delivered_bytes = bytes_per_tick(rr.delivered, tick_ms);
  }

  offered_.clear();
  return report;
}

}  // namespace iotsdn
