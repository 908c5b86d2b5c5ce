#ifndef SOLROB_NETCORE_HPP
#define SOLROB_NETCORE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "solrob/error.hpp"
#include "solrob/rational.hpp"

namespace solrob {

using NodeId = std::size_t;
using ArcId = std::size_t;

/// Arc capacity: a nonnegative integer or the +infinity sentinel.
class Capacity {
 public:
  constexpr Capacity() = default;
  constexpr Capacity(std::int64_t value) : value_(value) {}  // NOLINT(implicit)

  static constexpr Capacity infinite() {
    Capacity c;
    c.infinite_ = true;
    return c;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  std::int64_t value() const {
    if (infinite_) throw StructuralError("infinite capacity has no finite value");
    return value_;
  }

  /// Finite value, or `cap` when infinite.
  constexpr std::int64_t value_or(std::int64_t cap) const { return infinite_ ? cap : value_; }

  constexpr bool admits(std::int64_t x) const { return infinite_ || x <= value_; }

  std::string str() const { return infinite_ ? std::string("inf") : std::to_string(value_); }

  friend constexpr bool operator==(const Capacity& a, const Capacity& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  std::int64_t value_ = 0;
  bool infinite_ = false;
};

enum class NetworkKind { MinCostFlow, MaxFlow };

struct Arc {
  NodeId tail = 0;
  NodeId head = 0;
  std::int64_t lower = 0;  // arc demand
  Capacity upper;
  Rational cost;
  std::string tag;  // optional role label, e.g. "A_sl"

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Directed network with per-arc demand, capacity and cost. Immutable once built;
/// use NetworkBuilder to assemble one.
class FlowNetwork {
 public:
  FlowNetwork() = default;

  NetworkKind kind() const { return kind_; }
  std::size_t node_count() const { return node_names_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const Arc& arc(ArcId a) const { return arcs_.at(a); }
  const std::string& node_name(NodeId v) const { return node_names_.at(v); }
  const std::vector<std::string>& node_names() const { return node_names_; }
  std::int64_t balance(NodeId v) const { return balances_.at(v); }
  const std::vector<std::int64_t>& balances() const { return balances_; }
  std::optional<NodeId> source() const { return source_; }
  std::optional<NodeId> sink() const { return sink_; }
  bool has_terminals() const { return source_.has_value() && sink_.has_value(); }

  std::optional<NodeId> find_node(const std::string& name) const {
    for (NodeId v = 0; v < node_names_.size(); ++v)
      if (node_names_[v] == name) return v;
    return std::nullopt;
  }

  /// Copy with the bounds of one arc replaced. Used to materialize scenarios.
  FlowNetwork with_arc_bounds(ArcId a, std::int64_t lower, Capacity upper) const {
    FlowNetwork copy = *this;
    copy.arcs_.at(a).lower = lower;
    copy.arcs_.at(a).upper = upper;
    copy.validate();
    return copy;
  }

  friend bool operator==(const FlowNetwork&, const FlowNetwork&) = default;

 private:
  friend class NetworkBuilder;

  void validate() const {
    for (ArcId a = 0; a < arcs_.size(); ++a) {
      const Arc& arc = arcs_[a];
      if (arc.tail >= node_count() || arc.head >= node_count())
        throw StructuralError("arc " + std::to_string(a) + " references an unknown node");
      if (arc.lower < 0) throw StructuralError("arc " + std::to_string(a) + " has a negative demand");
      if (arc.upper.is_finite() && arc.upper.value() < 0)
        throw StructuralError("arc " + std::to_string(a) + " has a negative capacity");
      if (!arc.upper.admits(arc.lower))
        throw StructuralError("arc " + std::to_string(a) + " has demand above capacity");
    }
    std::int64_t total = 0;
    for (auto b : balances_) total += b;
    if (total != 0) throw StructuralError("node balances do not sum to zero");
    if (kind_ == NetworkKind::MaxFlow) {
      if (!has_terminals()) throw StructuralError("max-flow network needs a source and a sink");
    }
    if (source_.has_value() != sink_.has_value())
      throw StructuralError("source and sink must be designated together");
    if (has_terminals()) {
      if (*source_ >= node_count() || *sink_ >= node_count())
        throw StructuralError("source or sink references an unknown node");
      if (*source_ == *sink_) throw StructuralError("source and sink must differ");
    }
  }

  NetworkKind kind_ = NetworkKind::MinCostFlow;
  std::vector<std::string> node_names_;
  std::vector<Arc> arcs_;
  std::vector<std::int64_t> balances_;
  std::optional<NodeId> source_;
  std::optional<NodeId> sink_;
};

class NetworkBuilder {
 public:
  explicit NetworkBuilder(NetworkKind kind = NetworkKind::MinCostFlow) { net_.kind_ = kind; }

  NodeId add_node(std::string name = {}) {
    const NodeId id = net_.node_names_.size();
    net_.node_names_.push_back(name.empty() ? "v" + std::to_string(id) : std::move(name));
    net_.balances_.push_back(0);
    return id;
  }

  void add_nodes(std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) add_node();
  }

  ArcId add_arc(NodeId tail, NodeId head, std::int64_t lower, Capacity upper, Rational cost,
                std::string tag = {}) {
    net_.arcs_.push_back(Arc{tail, head, lower, upper, std::move(cost), std::move(tag)});
    return net_.arcs_.size() - 1;
  }

  void set_balance(NodeId v, std::int64_t b) { net_.balances_.at(v) = b; }

  void set_terminals(NodeId s, NodeId t) {
    net_.source_ = s;
    net_.sink_ = t;
  }

  std::size_t node_count() const { return net_.node_count(); }

  FlowNetwork build() const {
    net_.validate();
    return net_;
  }

 private:
  FlowNetwork net_;
};

enum class UncertaintyKind { Demand, Capacity };

struct Scenario {
  std::string id;
  Rational weight = 1;
  std::map<ArcId, Capacity> overrides;  // demand or capacity per arc, by kind

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Discrete scenario set: per-scenario weight and sparse arc overrides.
class FlowScenarioSet {
 public:
  FlowScenarioSet() = default;
  explicit FlowScenarioSet(UncertaintyKind kind) : kind_(kind) {}

  UncertaintyKind kind() const { return kind_; }
  const std::vector<Scenario>& scenarios() const { return scenarios_; }
  const Scenario& operator[](std::size_t i) const { return scenarios_.at(i); }
  std::size_t size() const { return scenarios_.size(); }
  bool empty() const { return scenarios_.empty(); }

  void add(Scenario scenario) { scenarios_.push_back(std::move(scenario)); }

  /// Checks weights and overrides against the network.
  void validate(const FlowNetwork& net) const {
    for (const auto& sc : scenarios_) {
      if (sc.weight <= 0) throw StructuralError("scenario '" + sc.id + "' needs a positive weight");
      for (const auto& [a, value] : sc.overrides) {
        if (a >= net.arc_count())
          throw StructuralError("scenario '" + sc.id + "' overrides unknown arc " + std::to_string(a));
        if (kind_ == UncertaintyKind::Demand) {
          if (value.is_infinite())
            throw StructuralError("scenario '" + sc.id + "' sets an infinite demand");
          if (value.value() < 0 || !net.arc(a).upper.admits(value.value()))
            throw StructuralError("scenario '" + sc.id + "' demand on arc " + std::to_string(a) +
                                  " is outside [0, u]");
        } else if (value.is_finite() && value.value() < 0) {
          throw StructuralError("scenario '" + sc.id + "' sets a negative capacity");
        }
      }
    }
  }

  /// The network as seen under scenario `index`.
  FlowNetwork apply(const FlowNetwork& net, std::size_t index) const {
    FlowNetwork result = net;
    for (const auto& [a, value] : scenarios_.at(index).overrides) {
      const Arc& arc = net.arc(a);
      if (kind_ == UncertaintyKind::Demand)
        result = result.with_arc_bounds(a, value.value(), arc.upper);
      else
        result = result.with_arc_bounds(a, arc.lower, value);
    }
    return result;
  }

  friend bool operator==(const FlowScenarioSet&, const FlowScenarioSet&) = default;

 private:
  UncertaintyKind kind_ = UncertaintyKind::Demand;
  std::vector<Scenario> scenarios_;
};

/// Nonnegative integer value per arc.
class IntegerFlow {
 public:
  IntegerFlow() = default;
  explicit IntegerFlow(std::size_t arc_count) : values_(arc_count, 0) {}
  explicit IntegerFlow(std::vector<std::int64_t> values) : values_(std::move(values)) {
    for (auto v : values_)
      if (v < 0) throw StructuralError("flow values must be nonnegative");
  }

  static IntegerFlow zero(const FlowNetwork& net) { return IntegerFlow(net.arc_count()); }

  std::size_t size() const { return values_.size(); }
  std::int64_t operator[](ArcId a) const { return values_.at(a); }
  const std::vector<std::int64_t>& values() const { return values_; }

  void set(ArcId a, std::int64_t v) {
    if (v < 0) throw StructuralError("flow values must be nonnegative");
    values_.at(a) = v;
  }

  friend bool operator==(const IntegerFlow&, const IntegerFlow&) = default;

 private:
  std::vector<std::int64_t> values_;
};

enum class DistanceKind { Value, Structure };

inline const char* to_string(DistanceKind k) { return k == DistanceKind::Value ? "value" : "structure"; }

struct Violation {
  enum class Kind { Conservation, BelowDemand, AboveCapacity };
  Kind kind;
  std::size_t index;  // node id for Conservation, arc id otherwise
  std::int64_t actual;
  std::int64_t expected;

  std::string describe() const {
    switch (kind) {
      case Kind::Conservation:
        return "node " + std::to_string(index) + ": net outflow " + std::to_string(actual) + " != " +
               std::to_string(expected);
      case Kind::BelowDemand:
        return "arc " + std::to_string(index) + ": flow " + std::to_string(actual) + " < demand " +
               std::to_string(expected);
      case Kind::AboveCapacity:
        return "arc " + std::to_string(index) + ": flow " + std::to_string(actual) + " > capacity " +
               std::to_string(expected);
    }
    return {};
  }
};

/// Net outflow (out minus in) of every node.
inline std::vector<std::int64_t> net_outflows(const FlowNetwork& net, const IntegerFlow& flow) {
  std::vector<std::int64_t> out(net.node_count(), 0);
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    out[net.arc(a).tail] += flow[a];
    out[net.arc(a).head] -= flow[a];
  }
  return out;
}

inline void require_same_arcs(const FlowNetwork& net, const IntegerFlow& flow) {
  if (flow.size() != net.arc_count())
    throw StructuralError("flow has " + std::to_string(flow.size()) + " arcs, network has " +
                          std::to_string(net.arc_count()));
}

/// Lists every broken constraint. For max-flow networks conservation is not
/// required at the source and sink.
inline std::vector<Violation> check_feasible(const FlowNetwork& net, const IntegerFlow& flow) {
  require_same_arcs(net, flow);
  std::vector<Violation> violations;
  const auto out = net_outflows(net, flow);
  const bool free_terminals = net.kind() == NetworkKind::MaxFlow;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (free_terminals && (v == *net.source() || v == *net.sink())) continue;
    if (out[v] != net.balance(v))
      violations.push_back({Violation::Kind::Conservation, v, out[v], net.balance(v)});
  }
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arc(a);
    if (flow[a] < arc.lower) violations.push_back({Violation::Kind::BelowDemand, a, flow[a], arc.lower});
    if (!arc.upper.admits(flow[a]))
      violations.push_back({Violation::Kind::AboveCapacity, a, flow[a], arc.upper.value()});
  }
  return violations;
}

inline std::vector<Violation> check_feasible(const FlowNetwork& net, const FlowScenarioSet& scenarios,
                                             std::size_t scenario, const IntegerFlow& flow) {
  return check_feasible(scenarios.apply(net, scenario), flow);
}

inline bool is_feasible(const FlowNetwork& net, const IntegerFlow& flow) {
  return check_feasible(net, flow).empty();
}

inline Rational flow_cost(const FlowNetwork& net, const IntegerFlow& flow) {
  require_same_arcs(net, flow);
  Rational total = 0;
  for (ArcId a = 0; a < net.arc_count(); ++a)
    if (flow[a] != 0) total += net.arc(a).cost * flow[a];
  return total;
}

/// Net outflow of the designated source.
inline std::int64_t flow_value(const FlowNetwork& net, const IntegerFlow& flow) {
  require_same_arcs(net, flow);
  if (!net.source()) throw StructuralError("flow value needs a designated source");
  return net_outflows(net, flow)[*net.source()];
}

inline std::int64_t distance(const IntegerFlow& f1, const IntegerFlow& f2, DistanceKind kind) {
  if (f1.size() != f2.size()) throw StructuralError("distance between flows of different arc sets");
  std::int64_t total = 0;
  for (std::size_t a = 0; a < f1.size(); ++a) {
    if (kind == DistanceKind::Value)
      total += f1[a] > f2[a] ? f1[a] - f2[a] : f2[a] - f1[a];
    else
      total += (f1[a] > 0) != (f2[a] > 0) ? 1 : 0;
  }
  return total;
}

/// Upper bound on any arc flow of an optimal solution; replaces +inf for solving.
/// Sum of supplies, arc demands and finite capacities.
inline std::int64_t circulation_bound(const FlowNetwork& net) {
  std::int64_t bound = 0;
  for (auto b : net.balances()) bound += std::max<std::int64_t>(b, 0);
  for (const auto& arc : net.arcs()) {
    bound += arc.lower;
    if (arc.upper.is_finite()) bound += arc.upper.value();
  }
  return bound;
}

}  // namespace solrob

#endif  // SOLROB_NETCORE_HPP
