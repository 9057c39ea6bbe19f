#include "iotsdn/sdn_controller.hpp"

#include <algorithm>
#include <cassert>
#include <set>

#include "iotsdn/maxmin.hpp"

namespace iotsdn {

namespace {

bool path_contains(const Path& path, const LinkId& link) {
  return std::find(path.links.begin(), path.links.end(), link) !=
         path.links.end();
}

}  // namespace

SdnController::SdnController(
    const Topology& topology, bool integrated,
    const PerClass<Fraction>& default_classes,
    const std::map<LinkId, PerClass<Fraction>>& class_overrides,
    const std::map<LinkId, std::string>& shared_cables)
    : topology_(topology), integrated_(integrated) {
  for (const auto& [id, link] : topology_.links()) {
    auto oit = class_overrides.find(id);
    link_classes_[id] =
        oit != class_overrides.end() ? oit->second : default_classes;
    auto sit = shared_cables.find(id);
    const std::string resource = sit != shared_cables.end() ? sit->second : id;
    resource_by_link_[id] = resource;
    auto [cit, new_resource] = resource_capacity_.emplace(resource, link.capacity);
    if (!new_resource && cit->second != link.capacity) {
      throw ValidationError("links sharing cable " + resource +
                            " have different capacities");
    }
    auto [fit, new_classes] = resource_classes_.emplace(resource, link_classes_[id]);
    if (!new_classes && fit->second != link_classes_[id]) {
      throw ValidationError("links sharing cable " + resource +
                            " have different class constraints");
    }
  }
  for (const auto& [link, resource] : shared_cables) {
    if (resource_by_link_.count(link) == 0) {
      throw ValidationError("shared cable declared for unknown link " + link);
    }
  }
  rebuild_ledgers();
}

void SdnController::rebuild_ledgers() {
  ledgers_.clear();
  for (const auto& [resource, capacity] : resource_capacity_) {
    ledgers_.emplace(resource,
                     LinkLedger(resource, capacity, resource_classes_.at(resource)));
  }
}

const std::string& SdnController::resource_of(const LinkId& link) const {
  auto it = resource_by_link_.find(link);
  if (it == resource_by_link_.end()) {
    throw UnknownLink("no link " + link);
  }
  return it->second;
}

const LinkLedger& SdnController::ledger(const std::string& resource) const {
  auto it = ledgers_.find(resource);
  if (it == ledgers_.end()) {
    throw UnknownLink("no bandwidth resource " + resource);
  }
  return it->second;
}

std::vector<std::string> SdnController::resource_ids() const {
  std::vector<std::string> ids;
  ids.reserve(ledgers_.size());
  for (const auto& [id, _] : ledgers_) {
    ids.push_back(id);
  }
  return ids;
}

std::vector<std::string> SdnController::path_resources(const Path& path) const {
  std::vector<std::string> resources;
  resources.reserve(path.links.size());
  for (const LinkId& link : path.links) {
    resources.push_back(resource_by_link_.at(link));
  }
  return resources;
}

void SdnController::install_entries(const std::string& match, const Path& path,
                                    TrafficClass queue) {
  for (const LinkId& lid : path.links) {
    const Link& link = topology_.link(lid);
    if (topology_.node(link.src).kind == NodeKind::Switch) {
      entries_[{link.src, match}] = FlowEntry{link.src, match, lid, queue};
    }
  }
}

void SdnController::remove_entries(const std::string& match) {
  std::erase_if(entries_,
                [&](const auto& kv) { return kv.first.second == match; });
}

BitsPerSecond SdnController::setup_flow(const FlowGroup& group) {
  if (flows_.count(group.id) != 0) {
    throw ValidationError("flow " + group.id + " already installed");
  }
  InstalledFlow installed;
  installed.group = group;
  installed.path = topology_.compute_path(group.origin, group.destination);
  install_entries(group.id, installed.path, TrafficClass::Tc0);
  flows_.emplace(group.id, std::move(installed));
  recompute();
  return flows_.at(group.id).budget;
}

void SdnController::update_flow(const std::string& id, BitsPerSecond demand) {
  auto it = flows_.find(id);
  if (it == flows_.end()) {
    throw UnknownFlow("no flow " + id);
  }
  it->second.group.demand = std::max<BitsPerSecond>(demand, 0);
}

void SdnController::teardown_flow(const std::string& id) {
  auto it = flows_.find(id);
  if (it == flows_.end()) {
    throw UnknownFlow("no flow " + id);
  }
  flows_.erase(it);
  remove_entries(id);
  recompute();
}

bool SdnController::has_flow(const std::string& id) const {
  return flows_.count(id) != 0;
}

std::vector<std::string> SdnController::flow_ids() const {
  std::vector<std::string> ids;
  ids.reserve(flows_.size());
  for (const auto& [id, _] : flows_) {
    ids.push_back(id);
  }
  return ids;
}

const InstalledFlow& SdnController::flow(const std::string& id) const {
  auto it = flows_.find(id);
  if (it == flows_.end()) {
    throw UnknownFlow("no flow " + id);
  }
  return it->second;
}

BitsPerSecond SdnController::budget(const std::string& id) const {
  return flow(id).budget;
}

BitsPerSecond SdnController::setup_source(const std::string& id,
                                          const NodeId& origin,
                                          const NodeId& destination,
                                          TrafficClass cls,
                                          BitsPerSecond rate) {
  if (sources_.count(id) != 0) {
    throw ValidationError("source " + id + " already installed");
  }
  if (rate <= 0) {
    throw ValidationError("source rate must be positive");
  }
  InstalledSource src;
  src.id = id;
  src.origin = origin;
  src.destination = destination;
  src.cls = cls;
  src.rate = rate;
  src.path = topology_.compute_path(origin, destination);
  install_entries("src:" + id, src.path, cls);
  sources_.emplace(id, std::move(src));
  source_order_.push_back(id);
  recompute();
  return sources_.at(id).reserved;
}

void SdnController::teardown_source(const std::string& id) {
  auto it = sources_.find(id);
  if (it == sources_.end()) {
    throw UnknownFlow("no source " + id);
  }
  sources_.erase(it);
  source_order_.erase(
      std::find(source_order_.begin(), source_order_.end(), id));
  remove_entries("src:" + id);
  recompute();
}

bool SdnController::has_source(const std::string& id) const {
  return sources_.count(id) != 0;
}

const InstalledSource& SdnController::source(const std::string& id) const {
  auto it = sources_.find(id);
  if (it == sources_.end()) {
    throw UnknownFlow("no source " + id);
  }
  return it->second;
}

void SdnController::recompute() {
  rebuild_ledgers();

  // Native sources first, in arrival order; they never borrow.
  for (const std::string& sid : source_order_) {
    InstalledSource& src = sources_.at(sid);
    BitsPerSecond grant = src.rate;
    for (const std::string& r : path_resources(src.path)) {
      grant = std::min(grant, ledgers_.at(r).headroom(src.cls));
    }
    src.reserved = grant;
    if (grant > 0) {
      for (const std::string& r : path_resources(src.path)) {
        AdmitResult res =
            ledgers_.at(r).admit("src:" + sid + "@" + r, src.cls, grant);
        assert(std::holds_alternative<Reservation>(res));
        (void)res;
      }
    }
  }

  // Per-resource pools open to IoT: Tc0 headroom always, lender classes
  // only when integration is on.
  std::vector<std::string> rids = resource_ids();
  std::map<std::string, std::size_t> rindex;
  for (std::size_t i = 0; i < rids.size(); ++i) {
    rindex[rids[i]] = i;
  }
  std::map<std::string, PerClass<BitsPerSecond>> pools;
  std::vector<BitsPerSecond> caps(rids.size(), 0);
  for (std::size_t i = 0; i < rids.size(); ++i) {
    const LinkLedger& led = ledgers_.at(rids[i]);
    PerClass<BitsPerSecond> pool{};
    pool[0] = led.headroom(TrafficClass::Tc0);
    if (integrated_) {
      pool[1] = led.headroom(TrafficClass::Tc1);
      pool[2] = led.headroom(TrafficClass::Tc2);
    }
    caps[i] = pool[0] + pool[1] + pool[2];
    pools[rids[i]] = pool;
  }

  // Max-min fill of group demands over the pooled capacities.
  std::vector<std::string> fids;
  std::vector<FillFlow> fill;
  for (const auto& [fid, f] : flows_) {
    fids.push_back(fid);
    FillFlow ff;
    ff.demand = std::max<BitsPerSecond>(f.group.demand, 0);
    for (const std::string& r : path_resources(f.path)) {
      ff.resources.push_back(rindex.at(r));
    }
    fill.push_back(std::move(ff));
  }
  std::vector<BitsPerSecond> alloc = progressive_fill(fill, caps);

  // Book each group's allocation on every path resource, filling classes in
  // ascending order, groups in id order within a class.
  for (auto& [fid, f] : flows_) {
    f.slices.clear();
    f.budget = 0;
  }
  std::map<std::string, std::map<std::string, BitsPerSecond>> open;  // r -> fid -> unbooked
  for (std::size_t k = 0; k < fids.size(); ++k) {
    InstalledFlow& f = flows_.at(fids[k]);
    f.budget = alloc[k];
    for (const std::string& r : path_resources(f.path)) {
      f.slices[r] = PerClass<BitsPerSecond>{};
      if (alloc[k] > 0) {
        open[r][fids[k]] = alloc[k];
      }
    }
  }
  for (const std::string& r : rids) {
    auto oit = open.find(r);
    if (oit == open.end()) {
      continue;
    }
    LinkLedger& led = ledgers_.at(r);
    for (int c = 0; c < kNumTrafficClasses; ++c) {
      BitsPerSecond pool_left = pools.at(r)[c];
      for (auto& [fid, unbooked] : oit->second) {
        if (unbooked == 0 || pool_left == 0) {
          continue;
        }
        BitsPerSecond take = std::min(unbooked, pool_left);
        AdmitResult res =
            led.admit(fid + "@" + r + "#tc" + std::to_string(c),
                      tc_from_index(c), take, TrafficClass::Tc0);
        assert(std::holds_alternative<Reservation>(res));
        (void)res;
        flows_.at(fid).slices[r][c] += take;
        unbooked -= take;
        pool_left -= take;
      }
    }
    for (const auto& [fid, unbooked] : oit->second) {
      assert(unbooked == 0);
      (void)unbooked;
    }
  }
}

MonitorSample SdnController::monitor(Tick tick) const {
  MonitorSample sample;
  sample.tick = tick;
  for (const auto& [rid, led] : ledgers_) {
    PerClass<ClassUsage> row{};
    for (TrafficClass tc : kTrafficClasses) {
      row[tc_index(tc)] = ClassUsage{led.limit(tc), led.allocated(tc),
                                     led.borrowed(tc), led.headroom(tc)};
    }
    sample.resources.emplace(rid, row);
  }
  return sample;
}

std::vector<Reassignment> SdnController::rebalance(Tick tick) {
  recompute();

  std::vector<Reassignment> log;
  std::set<std::string> all_flows;
  for (const auto& [fid, _] : logged_slices_) {
    all_flows.insert(fid);
  }
  for (const auto& [fid, _] : flows_) {
    all_flows.insert(fid);
  }
  for (const std::string& fid : all_flows) {
    const std::map<std::string, PerClass<BitsPerSecond>>* before = nullptr;
    const std::map<std::string, PerClass<BitsPerSecond>>* after = nullptr;
    if (auto it = logged_slices_.find(fid); it != logged_slices_.end()) {
      before = &it->second;
    }
    if (auto it = flows_.find(fid); it != flows_.end()) {
      after = &it->second.slices;
    }
    std::set<std::string> resources;
    if (before != nullptr) {
      for (const auto& [r, _] : *before) {
        resources.insert(r);
      }
    }
    if (after != nullptr) {
      for (const auto& [r, _] : *after) {
        resources.insert(r);
      }
    }
    for (const std::string& r : resources) {
      PerClass<BitsPerSecond> old_row{};
      PerClass<BitsPerSecond> new_row{};
      if (before != nullptr) {
        if (auto it = before->find(r); it != before->end()) {
          old_row = it->second;
        }
      }
      if (after != nullptr) {
        if (auto it = after->find(r); it != after->end()) {
          new_row = it->second;
        }
      }
      if (old_row == new_row) {
        continue;
      }
      std::vector<std::pair<int, BitsPerSecond>> shrink, grow;
      for (int c = 0; c < kNumTrafficClasses; ++c) {
        BitsPerSecond delta = new_row[c] - old_row[c];
        if (delta < 0) {
          shrink.emplace_back(c, -delta);
        } else if (delta > 0) {
          grow.emplace_back(c, delta);
        }
      }
      std::size_t gi = 0;
      for (auto& [from, amount] : shrink) {
        while (amount > 0 && gi < grow.size()) {
          BitsPerSecond moved = std::min(amount, grow[gi].second);
          log.push_back(Reassignment{tick, fid, r, tc_from_index(from),
                                     tc_from_index(grow[gi].first), moved});
          amount -= moved;
          grow[gi].second -= moved;
          if (grow[gi].second == 0) {
            ++gi;
          }
        }
        if (amount > 0) {
          log.push_back(Reassignment{tick, fid, r, tc_from_index(from),
                                     std::nullopt, amount});
        }
      }
      for (; gi < grow.size(); ++gi) {
        if (grow[gi].second > 0) {
          log.push_back(Reassignment{tick, fid, r, std::nullopt,
                                     tc_from_index(grow[gi].first),
                                     grow[gi].second});
        }
      }
    }
  }

  // Pure Tc0 admission growth or shrink is rate adaptation, not a class
  // reassignment; drop it from the report.
  std::erase_if(log, [](const Reassignment& r) {
    bool from_tc0 = !r.from || *r.from == TrafficClass::Tc0;
    bool to_tc0 = !r.to || *r.to == TrafficClass::Tc0;
    return from_tc0 && to_tc0 && !(r.from && r.to);
  });

  logged_slices_.clear();
  for (const auto& [fid, f] : flows_) {
    logged_slices_[fid] = f.slices;
  }
  return log;
}

std::map<LinkId, PerClass<QueueLimit>> SdnController::apply_queue_limits()
    const {
  std::map<LinkId, PerClass<QueueLimit>> out;
  for (const auto& [lid, link] : topology_.links()) {
    const std::string& r = resource_by_link_.at(lid);
    const LinkLedger& led = ledgers_.at(r);
    PerClass<QueueLimit> row{};
    for (int c = 0; c < kNumTrafficClasses; ++c) {
      BitsPerSecond reserved_here = 0;
      BitsPerSecond borrowed_here = 0;
      for (const auto& [fid, f] : flows_) {
        if (!path_contains(f.path, lid)) {
          continue;
        }
        auto sit = f.slices.find(r);
        if (sit == f.slices.end()) {
          continue;
        }
        reserved_here += sit->second[c];
        if (c != tc_index(TrafficClass::Tc0)) {
          borrowed_here += sit->second[c];
        }
      }
      for (const auto& [sid, src] : sources_) {
        if (tc_index(src.cls) == c && path_contains(src.path, lid)) {
          reserved_here += src.reserved;
        }
      }
      row[c] = QueueLimit{reserved_here + led.headroom(tc_from_index(c)),
                          borrowed_here};
    }
    out.emplace(lid, row);
  }
  return out;
}

std::vector<DemandSegment> SdnController::segment_demand(
    const std::string& id, BitsPerSecond rate) const {
  const InstalledFlow& f = flow(id);
  if (rate < 0 || rate > f.budget) {
    throw ValidationError("segment rate outside flow " + id + " budget");
  }
  std::vector<DemandSegment> segments;
  if (rate == 0) {
    return segments;
  }
  // Class changes along the booked decomposition of any path link cut the
  // demand into segments.
  std::set<BitsPerSecond> cuts{0, rate};
  for (const LinkId& lid : f.path.links) {
    const PerClass<BitsPerSecond>& row =
        f.slices.at(resource_by_link_.at(lid));
    BitsPerSecond cum = 0;
    for (int c = 0; c < kNumTrafficClasses; ++c) {
      cum += row[c];
      if (cum > 0 && cum < rate) {
        cuts.insert(cum);
      }
    }
  }
  std::vector<BitsPerSecond> edges(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    DemandSegment seg;
    seg.rate = edges[i + 1] - edges[i];
    BitsPerSecond offset = edges[i];
    for (const LinkId& lid : f.path.links) {
      const PerClass<BitsPerSecond>& row =
          f.slices.at(resource_by_link_.at(lid));
      BitsPerSecond cum = 0;
      TrafficClass cls = TrafficClass::Tc0;
      for (int c = 0; c < kNumTrafficClasses; ++c) {
        if (offset < cum + row[c]) {
          cls = tc_from_index(c);
          break;
        }
        cum += row[c];
      }
      seg.cls.push_back(cls);
    }
    segments.push_back(std::move(seg));
  }
  return segments;
}

}  // namespace iotsdn
