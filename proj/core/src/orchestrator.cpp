#include "iotsdn/orchestrator.hpp"

#include <algorithm>
#include <cmath>

#include "iotsdn/maxmin.hpp"
#include "iotsdn/sdn_controller.hpp"

namespace iotsdn {

namespace {

std::string group_id(const NodeId& origin, const NodeId& destination) {
  return origin + "->" + destination;
}

}  // namespace

const Subscription& Orchestrator::subscribe(const NodeId& consumer,
                                            const Topic& topic) {
  std::string id = consumer + ":" + topic.name;
  if (subscriptions_.count(id) != 0) {
    throw DuplicateSubscription(consumer + " already subscribes to " +
                                topic.name);
  }
  Subscription sub{id, consumer, topic.name, topic.home, topic.qos};
  auto [it, _] = subscriptions_.emplace(id, std::move(sub));

  std::string gid = group_id(topic.home, consumer);
  FlowGroup& group = groups_[gid];
  if (group.id.empty()) {
    group.id = gid;
    group.origin = topic.home;
    group.destination = consumer;
  }
  group.members.insert(
      std::lower_bound(group.members.begin(), group.members.end(), id), id);
  return it->second;
}

Subscription Orchestrator::unsubscribe(const NodeId& consumer,
                                       const std::string& topic) {
  std::string id = consumer + ":" + topic;
  auto it = subscriptions_.find(id);
  if (it == subscriptions_.end()) {
    throw UnknownSubscription(consumer + " does not subscribe to " + topic);
  }
  Subscription removed = it->second;
  subscriptions_.erase(it);
  demands_.erase(id);

  std::string gid = group_id(removed.aggregator, consumer);
  FlowGroup& group = groups_.at(gid);
  group.members.erase(
      std::find(group.members.begin(), group.members.end(), id));
  if (group.members.empty()) {
    groups_.erase(gid);
    budgets_.erase(gid);
  }
  return removed;
}

bool Orchestrator::has_subscription(const std::string& id) const {
  return subscriptions_.count(id) != 0;
}

const Subscription& Orchestrator::subscription(const std::string& id) const {
  auto it = subscriptions_.find(id);
  if (it == subscriptions_.end()) {
    throw UnknownSubscription("no subscription " + id);
  }
  return it->second;
}

std::map<std::string, BitsPerSecond> Orchestrator::poll_status(
    const std::map<NodeId, Aggregator>& aggregators, int tick_ms) {
  std::map<std::string, BitsPerSecond> report;
  for (const auto& [id, sub] : subscriptions_) {
    const Aggregator& agg = aggregators.at(sub.aggregator);
    Bytes backlog = agg.backlog(sub.topic, id);
    report[id] = rate_from_bytes(backlog, tick_ms);
  }
  demands_ = report;
  for (auto& [gid, group] : groups_) {
    group.demand = 0;
    for (const std::string& member : group.members) {
      auto it = demands_.find(member);
      if (it != demands_.end()) {
        group.demand += it->second;
      }
    }
  }
  return report;
}

std::map<std::string, BitsPerSecond> Orchestrator::request_flows(
    SdnController& controller) {
  for (const std::string& installed : controller.flow_ids()) {
    if (groups_.count(installed) == 0) {
      controller.teardown_flow(installed);
    }
  }
  std::map<std::string, BitsPerSecond> granted;
  for (const auto& [gid, group] : groups_) {
    if (controller.has_flow(gid)) {
      controller.update_flow(gid, group.demand);
    } else {
      controller.setup_flow(group);
    }
    granted[gid] = controller.budget(gid);
  }
  budgets_ = granted;
  return granted;
}

void Orchestrator::set_budget(const std::string& group, BitsPerSecond budget) {
  budgets_[group] = budget;
}

void Orchestrator::refresh_budgets(const SdnController& controller) {
  for (const auto& [gid, _] : groups_) {
    budgets_[gid] = controller.budget(gid);
  }
}

RatePlan Orchestrator::compute_rate_plan(
    const std::map<std::string, BitsPerSecond>& demands,
    const std::map<std::string, BitsPerSecond>& budgets, Tick epoch) const {
  RatePlan plan;
  plan.epoch = epoch;
  for (const auto& [id, _] : subscriptions_) {
    plan.grants[id] = 0.0;
  }
  for (const auto& [gid, group] : groups_) {
    auto bit = budgets.find(gid);
    double budget = bit == budgets.end() ? 0.0 : static_cast<double>(bit->second);
    std::vector<std::pair<QosLevel, double>> member_demands;
    member_demands.reserve(group.members.size());
    for (const std::string& member : group.members) {
      auto dit = demands.find(member);
      double demand = dit == demands.end() ? 0.0 : static_cast<double>(dit->second);
      member_demands.emplace_back(subscriptions_.at(member).qos, demand);
    }
    std::vector<double> grants = plan_group(budget, member_demands);
    for (std::size_t i = 0; i < group.members.size(); ++i) {
      plan.grants[group.members[i]] = grants[i];
    }
  }
  return plan;
}

std::map<std::string, BitsPerSecond> Orchestrator::quantize_plan(
    const RatePlan& plan) const {
  std::map<std::string, BitsPerSecond> rates;
  for (const auto& [id, grant] : plan.grants) {
    rates[id] = round_half_even(grant);
  }
  // Rounding may push a group's total one unit past its budget; trim the
  // largest grants first, larger id on ties.
  for (const auto& [gid, group] : groups_) {
    auto bit = budgets_.find(gid);
    BitsPerSecond budget = bit == budgets_.end() ? 0 : bit->second;
    BitsPerSecond total = 0;
    for (const std::string& member : group.members) {
      total += rates[member];
    }
    while (total > budget) {
      const std::string* victim = nullptr;
      BitsPerSecond largest = 0;
      for (const std::string& member : group.members) {
        BitsPerSecond rate = rates[member];
        if (rate > 0 && (victim == nullptr || rate > largest ||
                         (rate == largest && member > *victim))) {
          victim = &member;
          largest = rate;
        }
      }
      if (victim == nullptr) {
        break;
      }
      --rates[*victim];
      --total;
    }
  }
  return rates;
}

std::vector<double> Orchestrator::plan_group(
    double budget, const std::vector<std::pair<QosLevel, double>>& demands) {
  std::vector<double> grants(demands.size(), 0.0);
  if (budget <= 0.0) {
    return grants;
  }
  std::vector<QosLevel> levels;
  for (const auto& [level, _] : demands) {
    levels.push_back(level);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  double remaining = budget;
  for (QosLevel level : levels) {
    if (remaining <= 0.0) {
      break;
    }
    std::vector<std::size_t> idx;
    std::vector<double> level_demands;
    for (std::size_t i = 0; i < demands.size(); ++i) {
      if (demands[i].first == level) {
        idx.push_back(i);
        level_demands.push_back(std::max(demands[i].second, 0.0));
      }
    }
    std::vector<double> shares = waterfill_real(remaining, level_demands);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      grants[idx[k]] = shares[k];
      remaining -= shares[k];
    }
  }
  return grants;
}

}  // namespace iotsdn
