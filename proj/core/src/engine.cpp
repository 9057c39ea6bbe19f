#include "iotsdn/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "iotsdn/errors.hpp"
#include "iotsdn/orchestrator.hpp"

namespace iotsdn {

namespace {

std::string fraction6(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

struct Engine {
  const Scenario& sc;
  const RunOptions& opt;
  MetricsSink* sink;

  int tick_ms;
  std::uint64_t seed;
  Topology topo;
  SdnController ctrl;
  NetSim net;
  Orchestrator orch;
  std::map<NodeId, Aggregator> aggs;
  std::mt19937_64 rng;

  std::set<std::string> active_sources;
  std::set<std::string> iot_routes;
  std::map<std::string, Bytes> delivered_total;

  Engine(const Scenario& sc, const RunOptions& opt, MetricsSink* sink)
      : sc(sc),
        opt(opt),
        sink(sink),
        tick_ms(opt.tick_ms.value_or(sc.tick_ms)),
        seed(opt.seed.value_or(sc.seed)),
        topo(sc.build_topology()),
        ctrl(topo, opt.integrated, sc.classes, sc.class_overrides,
             sc.shared_cables()),
        net(topo),
        rng(seed) {
    if (tick_ms <= 0) {
      throw ValidationError("tick length must be positive");
    }
    for (const Node& node : sc.nodes) {
      if (node.kind == NodeKind::Aggregator) {
        aggs.emplace(node.id, Aggregator(node.id));
      }
    }
    for (const TopicSpec& t : sc.topics) {
      aggs.at(t.aggregator)
          .add_topic(Topic{t.name, t.aggregator, t.qos, t.buffer});
    }
  }

  double uniform() {
    // 53-bit mantissa draw; std distributions are not portable bit-for-bit.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }

  void apply_event(const EventSpec& ev) {
    switch (ev.kind) {
      case EventKind::StartSource: {
        const SourceSpec& src = sc.source_spec(ev.source);
        ctrl.setup_source(src.id, src.origin, src.destination, src.cls,
                          src.rate);
        net.register_route(src.id,
                           topo.compute_path(src.origin, src.destination),
                           RouteKind::Background);
        active_sources.insert(src.id);
        break;
      }
      case EventKind::StopSource:
        ctrl.teardown_source(ev.source);
        net.remove_route(ev.source);
        active_sources.erase(ev.source);
        break;
      case EventKind::Subscribe:
        for (const NodeId& aid : ev.aggregators) {
          Aggregator& agg = aggs.at(aid);
          for (const std::string& name : agg.topic_names()) {
            const Subscription& sub = orch.subscribe(ev.consumer,
                                                     agg.topic(name));
            agg.attach(name, sub.id);
          }
        }
        break;
      case EventKind::Unsubscribe:
        for (const NodeId& aid : ev.aggregators) {
          Aggregator& agg = aggs.at(aid);
          for (const std::string& name : agg.topic_names()) {
            Subscription sub = orch.unsubscribe(ev.consumer, name);
            agg.detach(name, sub.id);
          }
        }
        break;
      case EventKind::EndSimulation:
        break;
    }
  }

  void ingest(Tick t) {
    for (const IngestSpec& ing : sc.ingests) {
      if (t < ing.from || t >= ing.to) {
        continue;
      }
      Bytes bytes = ing.bytes_per_second * tick_ms / 1000;
      if (sc.jitter > 0.0) {
        double factor = 1.0 + sc.jitter * (2.0 * uniform() - 1.0);
        bytes = std::llround(static_cast<double>(bytes) * factor);
        bytes = std::max<Bytes>(bytes, 0);
      }
      aggs.at(sc.topic_spec(ing.topic).aggregator).ingest(ing.topic, bytes);
    }
  }

  void reconcile_routes() {
    for (const auto& [gid, group] : orch.groups()) {
      if (iot_routes.insert(gid).second) {
        net.register_route(gid, ctrl.flow(gid).path, RouteKind::Iot);
      }
    }
    for (auto it = iot_routes.begin(); it != iot_routes.end();) {
      if (orch.groups().count(*it) == 0) {
        net.remove_route(*it);
        it = iot_routes.erase(it);
      } else {
        ++it;
      }
    }
  }

  RunResult execute() {
    RunResult result;
    RunSummary& sum = result.summary;
    sum.scenario = sc.name;
    sum.integrated = opt.integrated;
    sum.ticks = sc.end_tick;
    sum.tick_ms = tick_ms;
    sum.seed = seed;
    std::map<LinkId, double> util_sum;
    for (const auto& [lid, link] : topo.links()) {
      sum.links[lid] = LinkSummary{};
      util_sum[lid] = 0.0;
    }

    std::size_t next_event = 0;
    for (Tick t = 0; t < sc.end_tick; ++t) {
      while (next_event < sc.events.size() &&
             sc.events[next_event].tick <= t) {
        apply_event(sc.events[next_event++]);
      }
      ingest(t);

      orch.poll_status(aggs, tick_ms);
      orch.request_flows(ctrl);
      reconcile_routes();
      ctrl.monitor(t);
      std::vector<Reassignment> moves = ctrl.rebalance(t);
      net.set_queue_limits(ctrl.apply_queue_limits());
      orch.refresh_budgets(ctrl);

      RatePlan plan = orch.compute_rate_plan(t);
      std::map<std::string, BitsPerSecond> grants = orch.quantize_plan(plan);

      std::map<NodeId, GrantTable> tables;
      for (const auto& [aid, agg] : aggs) {
        tables[aid];
      }
      for (const auto& [sid, rate] : grants) {
        const Subscription& sub = orch.subscription(sid);
        tables[sub.aggregator][{sub.topic, sid}] = rate;
      }
      for (auto& [aid, agg] : aggs) {
        agg.apply_grants(tables[aid]);
      }

      std::map<std::string, Bytes> delivered;
      for (const auto& [sid, sub] : orch.subscriptions()) {
        delivered[sid] = 0;
      }
      std::map<std::string, BitsPerSecond> group_rate;
      for (const auto& [gid, group] : orch.groups()) {
        group_rate[gid] = 0;
      }
      for (auto& [aid, agg] : aggs) {
        for (const Emission& em : agg.drain(tick_ms)) {
          const Subscription& sub = orch.subscription(em.subscription);
          delivered[em.subscription] += em.bytes;
          group_rate[sub.aggregator + "->" + sub.consumer] +=
              rate_from_bytes(em.bytes, tick_ms);
        }
      }

      std::vector<FlowDemand> offers;
      for (const auto& [gid, rate] : group_rate) {
        if (rate == 0) {
          continue;
        }
        for (const DemandSegment& seg : ctrl.segment_demand(gid, rate)) {
          offers.push_back(FlowDemand{gid, seg.rate, seg.rate, seg.cls});
        }
      }
      for (const std::string& sid : active_sources) {
        const InstalledSource& src = ctrl.source(sid);
        offers.push_back(FlowDemand{
            sid, src.rate, src.reserved,
            std::vector<TrafficClass>(src.path.links.size(), src.cls)});
      }
      net.offer(offers);
      TickReport report = net.serve(t, tick_ms);

      // Granted IoT traffic is reserved end to end; the buffers already
      // released these bytes, so anything short here is a booking bug.
      for (const auto& [gid, rate] : group_rate) {
        const RouteReport& rr = report.routes.at(gid);
        if (rr.delivered != rr.offered) {
          throw Error("route " + gid + " under-served: delivered " +
                      std::to_string(rr.delivered) + " of " +
                      std::to_string(rr.offered));
        }
      }

      for (const auto& [lid, row] : report.links) {
        util_sum[lid] += row.utilization;
        sum.links[lid].peak = std::max(sum.links[lid].peak, row.utilization);
      }
      for (const auto& [sid, bytes] : delivered) {
        delivered_total[sid] += bytes;
      }
      if (sink != nullptr) {
        sink->on_tick(report, grants, delivered);
      }
      if (opt.record_trace) {
        TickTrace trace;
        trace.tick = t;
        trace.links = report.links;
        trace.resources = ctrl.monitor(t).resources;
        trace.reassignments = std::move(moves);
        for (const std::string& sid : active_sources) {
          trace.source_offered[sid] = ctrl.source(sid).rate;
          trace.source_delivered[sid] = report.routes.at(sid).delivered;
        }
        trace.grants = std::move(grants);
        trace.delivered = std::move(delivered);
        trace.delivered_total = delivered_total;
        for (const auto& [aid, agg] : aggs) {
          for (const std::string& name : agg.topic_names()) {
            const TopicStream& stream = agg.stream(name);
            trace.topics[name] = TopicAccount{stream.ingested(),
                                              stream.dropped(),
                                              stream.occupancy(),
                                              stream.released()};
          }
        }
        result.trace.push_back(std::move(trace));
      }
    }

    for (auto& [lid, link] : sum.links) {
      link.average = sum.ticks > 0
                         ? util_sum[lid] / static_cast<double>(sum.ticks)
                         : 0.0;
    }
    sum.delivered = delivered_total;
    return result;
  }
};

}  // namespace

CsvSink::CsvSink(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  links_.open(dir / "links.csv", std::ios::binary | std::ios::trunc);
  subs_.open(dir / "subscriptions.csv", std::ios::binary | std::ios::trunc);
  if (!links_ || !subs_) {
    throw Error("cannot open output files under " + dir.string());
  }
  links_ << "tick,link,tc0_served,tc1_served,tc2_served,utilization\n";
  subs_ << "tick,subscription,grant,delivered\n";
}

void CsvSink::on_tick(const TickReport& report,
                      const std::map<std::string, BitsPerSecond>& grants,
                      const std::map<std::string, Bytes>& delivered) {
  for (const auto& [lid, row] : report.links) {
    links_ << report.tick << ',' << lid << ',' << row.served[0] << ','
           << row.served[1] << ',' << row.served[2] << ','
           << fraction6(row.utilization) << '\n';
  }
  for (const auto& [sid, rate] : grants) {
    subs_ << report.tick << ',' << sid << ',' << rate << ','
          << delivered.at(sid) << '\n';
  }
}

RunResult run(const Scenario& scenario, const RunOptions& options,
              MetricsSink* sink) {
  Engine engine(scenario, options, sink);
  return engine.execute();
}

std::string format_summary(const RunSummary& summary) {
  std::ostringstream out;
  out << "scenario " << summary.scenario << '\n';
  out << "mode " << (summary.integrated ? "integrated" : "non-integrated")
      << '\n';
  out << "ticks " << summary.ticks << '\n';
  out << "tick-ms " << summary.tick_ms << '\n';
  out << "seed " << summary.seed << '\n';
  out << '\n';
  for (const auto& [lid, link] : summary.links) {
    out << "link " << lid << " average " << fraction6(link.average)
        << " peak " << fraction6(link.peak) << '\n';
  }
  if (!summary.delivered.empty()) {
    out << '\n';
    Bytes total = 0;
    for (const auto& [sid, bytes] : summary.delivered) {
      out << "subscription " << sid << " delivered " << bytes << '\n';
      total += bytes;
    }
    out << "total delivered " << total << '\n';
  }
  return out.str();
}

void write_summary(const std::filesystem::path& file,
                   const RunSummary& summary) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write " + file.string());
  }
  out << format_summary(summary);
}

CompareResult compare(const Scenario& scenario, const RunOptions& base) {
  struct SeriesSink : MetricsSink {
    std::map<LinkId, std::vector<double>> series;
    void on_tick(const TickReport& report,
                 const std::map<std::string, BitsPerSecond>&,
                 const std::map<std::string, Bytes>&) override {
      for (const auto& [lid, row] : report.links) {
        series[lid].push_back(row.utilization);
      }
    }
  };

  CompareResult result;
  SeriesSink with, without;
  RunOptions options = base;
  options.record_trace = false;
  options.integrated = true;
  result.integrated = run(scenario, options, &with).summary;
  options.integrated = false;
  result.non_integrated = run(scenario, options, &without).summary;

  for (const auto& [lid, series] : with.series) {
    const std::vector<double>& other = without.series.at(lid);
    std::vector<std::pair<double, double>>& zipped = result.utilization[lid];
    zipped.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
      zipped.emplace_back(series[i], other[i]);
    }
  }
  return result;
}

std::string format_compare(const CompareResult& result) {
  std::ostringstream out;
  out << "scenario " << result.integrated.scenario << '\n';
  out << "ticks " << result.integrated.ticks << '\n';
  out << '\n';
  for (const auto& [lid, link] : result.integrated.links) {
    out << "link " << lid << " integrated " << fraction6(link.average)
        << " non-integrated "
        << fraction6(result.non_integrated.links.at(lid).average) << '\n';
  }
  return out.str();
}

void write_compare_csv(const std::filesystem::path& file,
                       const CompareResult& result) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write " + file.string());
  }
  out << "tick,link,integrated_utilization,non_integrated_utilization\n";
  const Tick ticks = result.integrated.ticks;
  for (Tick t = 0; t < ticks; ++t) {
    for (const auto& [lid, series] : result.utilization) {
      out << t << ',' << lid << ',' << fraction6(series[t].first) << ','
          << fraction6(series[t].second) << '\n';
    }
  }
}

}  // namespace iotsdn
