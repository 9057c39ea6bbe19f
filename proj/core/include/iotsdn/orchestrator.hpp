#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "iotsdn/aggregator.hpp"
#include "iotsdn/errors.hpp"
#include "iotsdn/types.hpp"

namespace iotsdn {

class SdnController;

// Consumer binding to a topic; the QoS level is inherited from the topic.
struct Subscription {
  std::string id;  // "<consumer>:<topic>"
  NodeId consumer;
  std::string topic;
  NodeId aggregator;
  QosLevel qos = 0;

  friend bool operator==(const Subscription&, const Subscription&) = default;
};

// All IoT traffic sharing one aggregator-to-consumer pair; the unit of path
// setup and class reassignment at the controller.
struct FlowGroup {
  std::string id;  // "<origin>-><destination>"
  NodeId origin;
  NodeId destination;
  std::vector<std::string> members;  // subscription ids, sorted
  BitsPerSecond demand = 0;          // sum of member demands
};

// Real-valued per-subscription grants; rounded to integer bits/s only at
// the data-plane boundary.
struct RatePlan {
  Tick epoch = 0;
  std::map<std::string, double> grants;
};

// Central registry of subscriptions and flow groups; polls aggregator
// backlogs, requests bandwidth from the controller, and splits each group's
// granted budget across member subscriptions by strict QoS priority.
class Orchestrator {
 public:
  const Subscription& subscribe(const NodeId& consumer, const Topic& topic);
  Subscription unsubscribe(const NodeId& consumer, const std::string& topic);

  bool has_subscription(const std::string& id) const;
  const Subscription& subscription(const std::string& id) const;
  const std::map<std::string, Subscription>& subscriptions() const {
    return subscriptions_;
  }
  const std::map<std::string, FlowGroup>& groups() const { return groups_; }

  // Demand per subscription: the reader backlog expressed as a rate over
  // one tick. Stores the report and refreshes group demands.
  std::map<std::string, BitsPerSecond> poll_status(
      const std::map<NodeId, Aggregator>& aggregators, int tick_ms);

  // Reconciles the controller's installed flows with the current groups
  // (teardown, setup, demand updates) and returns the budgets granted so
  // far. Budgets may change again when the controller rebalances.
  std::map<std::string, BitsPerSecond> request_flows(SdnController& controller);

  void set_budget(const std::string& group, BitsPerSecond budget);
  void refresh_budgets(const SdnController& controller);
  const std::map<std::string, BitsPerSecond>& budgets() const {
    return budgets_;
  }
  const std::map<std::string, BitsPerSecond>& demands() const {
    return demands_;
  }

  // Splits each group's budget across members: strict priority by QoS level
  // (level 0 first), max-min fair within one level, never above demand.
  RatePlan compute_rate_plan(const std::map<std::string, BitsPerSecond>& demands,
                             const std::map<std::string, BitsPerSecond>& budgets,
                             Tick epoch) const;
  RatePlan compute_rate_plan(Tick epoch) const {
    return compute_rate_plan(demands_, budgets_, epoch);
  }

  // Integer bits/s grants: round half to even, then trim the largest grants
  // by one unit until the group budget is respected again.
  std::map<std::string, BitsPerSecond> quantize_plan(const RatePlan& plan) const;

  // Planning kernel for one group: grants aligned with `demands` order.
  static std::vector<double> plan_group(
      double budget, const std::vector<std::pair<QosLevel, double>>& demands);

 private:
  std::map<std::string, Subscription> subscriptions_;
  std::map<std::string, FlowGroup> groups_;
  std::map<std::string, BitsPerSecond> demands_;
  std::map<std::string, BitsPerSecond> budgets_;
};

}  // namespace iotsdn
