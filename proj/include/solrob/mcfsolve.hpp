#ifndef SOLROB_MCFSOLVE_HPP
#define SOLROB_MCFSOLVE_HPP

// Exact integer min-cost flow (successive shortest paths with node potentials),
// max-flow as a circulation, and the convex-cost transformation that solves the
// reactive value-distance problem.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "solrob/netcore.hpp"

namespace solrob {

namespace detail {

constexpr std::int64_t kInfCost = std::numeric_limits<std::int64_t>::max() / 4;

struct FlowEdge {
  std::size_t tail;
  std::size_t head;
  std::int64_t capacity;
  std::int64_t cost;
};

/// Successive shortest augmenting paths on integer data. `supply` must sum to
/// zero. Returns the flow on every edge, or nullopt when the supplies cannot be
/// routed.
inline std::optional<std::vector<std::int64_t>> successive_shortest_paths(
    std::size_t node_count, const std::vector<FlowEdge>& edges, std::vector<std::int64_t> supply,
    bool trace = false) {
  struct Residual {
    std::size_t to;
    std::size_t rev;
    std::int64_t cap;
    std::int64_t cost;
  };
  const std::size_t super_source = node_count;
  const std::size_t super_sink = node_count + 1;
  const std::size_t n = node_count + 2;
  std::vector<std::vector<Residual>> adj(n);
  std::vector<std::pair<std::size_t, std::size_t>> handle(edges.size());
  std::vector<std::int64_t> preset(edges.size(), 0);

  auto add = [&](std::size_t u, std::size_t v, std::int64_t cap, std::int64_t cost) {
    adj[u].push_back({v, adj[v].size(), cap, cost});
    adj[v].push_back({u, adj[u].size() - 1, 0, -cost});
    return std::make_pair(u, adj[u].size() - 1);
  };

  // Saturate negative-cost edges up front; their residual reverses cost > 0.
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = edges[e];
    if (edge.cost < 0 && edge.capacity > 0) {
      preset[e] = edge.capacity;
      supply[edge.tail] -= edge.capacity;
      supply[edge.head] += edge.capacity;
    }
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = edges[e];
    handle[e] = add(edge.tail, edge.head, edge.capacity - preset[e], edge.cost);
    auto& fwd = adj[handle[e].first][handle[e].second];
    adj[fwd.to][fwd.rev].cap = preset[e];
  }
  std::int64_t required = 0;
  for (std::size_t v = 0; v < node_count; ++v) {
    if (supply[v] > 0) {
      add(super_source, v, supply[v], 0);
      required += supply[v];
    } else if (supply[v] < 0) {
      add(v, super_sink, -supply[v], 0);
    }
  }

  // Initial potentials by a label-correcting pass from the super source.
  std::vector<std::int64_t> potential(n, kInfCost);
  {
    std::vector<bool> queued(n, false);
    std::queue<std::size_t> queue;
    potential[super_source] = 0;
    queue.push(super_source);
    queued[super_source] = true;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop();
      queued[u] = false;
      for (const auto& r : adj[u]) {
        if (r.cap <= 0) continue;
        if (potential[u] + r.cost < potential[r.to]) {
          potential[r.to] = potential[u] + r.cost;
          if (!queued[r.to]) {
            queued[r.to] = true;
            queue.push(r.to);
          }
        }
      }
    }
    std::int64_t reach_max = 0;
    for (auto p : potential)
      if (p < kInfCost) reach_max = std::max(reach_max, p);
    for (auto& p : potential)
      if (p >= kInfCost) p = reach_max;
  }

  std::int64_t shipped = 0;
  std::vector<std::int64_t> dist(n);
  std::vector<std::pair<std::size_t, std::size_t>> parent(n);
  while (shipped < required) {
    std::fill(dist.begin(), dist.end(), kInfCost);
    using Item = std::pair<std::int64_t, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[super_source] = 0;
    heap.push({0, super_source});
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (std::size_t i = 0; i < adj[u].size(); ++i) {
        const auto& r = adj[u][i];
        if (r.cap <= 0) continue;
        const std::int64_t nd = d + r.cost + potential[u] - potential[r.to];
        if (nd < dist[r.to]) {
          dist[r.to] = nd;
          parent[r.to] = {u, i};
          heap.push({nd, r.to});
        }
      }
    }
    if (dist[super_sink] >= kInfCost) return std::nullopt;
    std::int64_t reach_max = 0;
    for (auto d : dist)
      if (d < kInfCost) reach_max = std::max(reach_max, d);
    for (std::size_t v = 0; v < n; ++v) potential[v] += std::min(dist[v], reach_max);

    std::int64_t push = std::numeric_limits<std::int64_t>::max();
    for (std::size_t v = super_sink; v != super_source; v = parent[v].first)
      push = std::min(push, adj[parent[v].first][parent[v].second].cap);
    for (std::size_t v = super_sink; v != super_source; v = parent[v].first) {
      auto& r = adj[parent[v].first][parent[v].second];
      r.cap -= push;
      adj[r.to][r.rev].cap += push;
    }
    shipped += push;
    if (trace)
      std::clog << "ssp: augmented " << push << " units, reduced path cost " << dist[super_sink] << "\n";
  }

  std::vector<std::int64_t> flow(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& fwd = adj[handle[e].first][handle[e].second];
    flow[e] = adj[fwd.to][fwd.rev].cap;
  }
  return flow;
}

/// Multiplies every arc cost by the least common denominator.
inline std::vector<std::int64_t> integer_costs(const std::vector<Rational>& costs) {
  BigInt lcm = 1;
  for (const auto& c : costs) {
    const BigInt d = denominator(c);
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
  }
  std::vector<std::int64_t> out;
  out.reserve(costs.size());
  for (const auto& c : costs) out.push_back(to_int64(c * lcm));
  return out;
}

/// True when arcs of infinite capacity carry a negative-cost cycle.
inline bool has_unbounded_negative_cycle(const FlowNetwork& net) {
  const std::size_t n = net.node_count();
  std::vector<Rational> dist(n, Rational(0));
  for (std::size_t round = 0; round <= n; ++round) {
    bool changed = false;
    for (const auto& arc : net.arcs()) {
      if (arc.upper.is_finite()) continue;
      if (dist[arc.tail] + arc.cost < dist[arc.head]) {
        dist[arc.head] = dist[arc.tail] + arc.cost;
        changed = true;
      }
    }
    if (!changed) return false;
  }
  return true;
}

}  // namespace detail

/// Network with arc demands removed (or, for the reactive transformation,
/// with the nominal flow injected as a fixed baseline) plus the information to
/// map its flows back onto the original arcs.
struct TransformedInstance {
  enum class Role { Baseline, Up, Down, Return };
  struct BackMap {
    ArcId original;  // meaningless for Return arcs
    Role role;
  };

  FlowNetwork base;
  Rational offset_cost;
  std::vector<BackMap> back_map;
  std::vector<std::int64_t> baseline;  // forced flow per original arc

  IntegerFlow map_back(const IntegerFlow& transformed) const {
    if (transformed.size() != back_map.size())
      throw StructuralError("transformed flow does not match the transformed network");
    std::vector<std::int64_t> values = baseline;
    for (std::size_t e = 0; e < back_map.size(); ++e) {
      switch (back_map[e].role) {
        case Role::Baseline:
        case Role::Up:
          values[back_map[e].original] += transformed[e];
          break;
        case Role::Down:
          values[back_map[e].original] -= transformed[e];
          break;
        case Role::Return:
          break;
      }
    }
    return IntegerFlow(std::move(values));
  }
};

/// Replaces each arc demand by a shift of the node balances. Flow f' on the
/// result maps back to f = f' + demand with cost(f) = cost(f') + offset_cost.
inline TransformedInstance eliminate_lower_bounds(const FlowNetwork& net) {
  if (net.kind() != NetworkKind::MinCostFlow)
    throw StructuralError("lower-bound elimination expects a min-cost flow network");
  NetworkBuilder builder(NetworkKind::MinCostFlow);
  for (NodeId v = 0; v < net.node_count(); ++v) builder.add_node(net.node_name(v));
  std::vector<std::int64_t> balance = net.balances();
  TransformedInstance result;
  result.offset_cost = 0;
  result.baseline.assign(net.arc_count(), 0);
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arc(a);
    const Capacity residual =
        arc.upper.is_infinite() ? Capacity::infinite() : Capacity(arc.upper.value() - arc.lower);
    builder.add_arc(arc.tail, arc.head, 0, residual, arc.cost, arc.tag);
    balance[arc.tail] -= arc.lower;
    balance[arc.head] += arc.lower;
    result.offset_cost += arc.cost * arc.lower;
    result.baseline[a] = arc.lower;
    result.back_map.push_back({a, TransformedInstance::Role::Baseline});
  }
  for (NodeId v = 0; v < net.node_count(); ++v) builder.set_balance(v, balance[v]);
  if (net.has_terminals()) builder.set_terminals(*net.source(), *net.sink());
  result.base = builder.build();
  return result;
}

/// Minimum-cost integer flow, or nullopt when no feasible flow exists.
/// Throws UnboundedError when a negative-cost cycle has unlimited capacity.
inline std::optional<IntegerFlow> solve_min_cost_flow(const FlowNetwork& net, bool trace = false) {
  if (net.kind() != NetworkKind::MinCostFlow)
    throw StructuralError("solve_min_cost_flow expects a min-cost flow network");
  if (detail::has_unbounded_negative_cycle(net))
    throw UnboundedError("negative-cost cycle of unlimited capacity");
  const std::int64_t cap = circulation_bound(net);
  const TransformedInstance t = eliminate_lower_bounds(net);
  std::vector<Rational> costs;
  for (const auto& arc : t.base.arcs()) costs.push_back(arc.cost);
  const auto int_costs = detail::integer_costs(costs);
  std::vector<detail::FlowEdge> edges;
  edges.reserve(t.base.arc_count());
  for (ArcId a = 0; a < t.base.arc_count(); ++a) {
    const Arc& arc = t.base.arc(a);
    edges.push_back({arc.tail, arc.head, arc.upper.value_or(cap), int_costs[a]});
  }
  auto flow = detail::successive_shortest_paths(t.base.node_count(), edges, t.base.balances(), trace);
  if (!flow) return std::nullopt;
  return t.map_back(IntegerFlow(std::move(*flow)));
}

namespace detail {

/// Max-flow network as a min-cost circulation: original arcs cost 0, plus a
/// t->s return arc of cost -1 (last arc).
inline FlowNetwork max_flow_circulation(const FlowNetwork& net, std::int64_t cap) {
  NetworkBuilder builder(NetworkKind::MinCostFlow);
  for (NodeId v = 0; v < net.node_count(); ++v) builder.add_node(net.node_name(v));
  for (const auto& arc : net.arcs()) builder.add_arc(arc.tail, arc.head, arc.lower, arc.upper, 0, arc.tag);
  builder.add_arc(*net.sink(), *net.source(), 0, cap, -1, "return");
  return builder.build();
}

inline bool has_infinite_path(const FlowNetwork& net, NodeId from, NodeId to) {
  std::vector<bool> seen(net.node_count(), false);
  std::vector<NodeId> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    if (u == to) return true;
    for (const auto& arc : net.arcs())
      if (arc.tail == u && arc.upper.is_infinite() && !seen[arc.head]) {
        seen[arc.head] = true;
        stack.push_back(arc.head);
      }
  }
  return false;
}

}  // namespace detail

/// Maximum-value integer flow from source to sink; nullopt when the arc
/// demands cannot be met. Throws UnboundedError on an all-infinite s-t path.
inline std::optional<IntegerFlow> solve_max_flow(const FlowNetwork& net, bool trace = false) {
  if (!net.has_terminals()) throw StructuralError("max-flow needs a source and a sink");
  if (detail::has_infinite_path(net, *net.source(), *net.sink()))
    throw UnboundedError("source and sink are joined by a path of infinite capacity");
  const FlowNetwork circ = detail::max_flow_circulation(net, circulation_bound(net));
  auto flow = solve_min_cost_flow(circ, trace);
  if (!flow) return std::nullopt;
  std::vector<std::int64_t> values(flow->values().begin(), flow->values().end() - 1);
  return IntegerFlow(std::move(values));
}

/// The reactive value-distance problem as a min-cost flow. Each arc's cost
/// |x - nominal_a| becomes an "up" arc and a reversed "down" arc of unit cost
/// around a baseline clamp(nominal_a, lower_a, upper_a). Deviation forced by the
/// clamp is charged in offset_cost. For max-flow networks two zero-cost return
/// arcs leave the flow value free.
inline TransformedInstance convex_transform(const FlowNetwork& net, const IntegerFlow& nominal) {
  require_same_arcs(net, nominal);
  using Role = TransformedInstance::Role;
  std::int64_t nominal_mass = 0;
  for (auto v : nominal.values()) nominal_mass += v;
  NetworkBuilder builder(NetworkKind::MinCostFlow);
  for (NodeId v = 0; v < net.node_count(); ++v) builder.add_node(net.node_name(v));
  std::vector<std::int64_t> balance = net.kind() == NetworkKind::MaxFlow
                                          ? std::vector<std::int64_t>(net.node_count(), 0)
                                          : net.balances();
  TransformedInstance result;
  result.offset_cost = 0;
  result.baseline.assign(net.arc_count(), 0);
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arc(a);
    std::int64_t base = std::max(nominal[a], arc.lower);
    if (arc.upper.is_finite()) base = std::min(base, arc.upper.value());
    result.baseline[a] = base;
    result.offset_cost += base > nominal[a] ? base - nominal[a] : nominal[a] - base;
    balance[arc.tail] -= base;
    balance[arc.head] += base;
    const Capacity up = arc.upper.is_infinite() ? Capacity::infinite() : Capacity(arc.upper.value() - base);
    builder.add_arc(arc.tail, arc.head, 0, up, 1, arc.tag);
    result.back_map.push_back({a, Role::Up});
    builder.add_arc(arc.head, arc.tail, 0, base - arc.lower, 1, arc.tag);
    result.back_map.push_back({a, Role::Down});
  }
  if (net.kind() == NetworkKind::MaxFlow) {
    const std::int64_t cap = circulation_bound(net) + 2 * nominal_mass;
    builder.add_arc(*net.sink(), *net.source(), 0, cap, 0, "return");
    result.back_map.push_back({0, Role::Return});
    builder.add_arc(*net.source(), *net.sink(), 0, cap, 0, "return");
    result.back_map.push_back({0, Role::Return});
  }
  for (NodeId v = 0; v < net.node_count(); ++v) builder.set_balance(v, balance[v]);
  result.base = builder.build();
  return result;
}

struct ReactiveFlow {
  IntegerFlow flow;
  std::int64_t cost = 0;
};

/// Feasible flow of `net` (already carrying the scenario's bounds) that is
/// closest to `nominal` in value distance; nullopt when the scenario is infeasible.
inline std::optional<ReactiveFlow> reactive_value_distance(const FlowNetwork& net, const IntegerFlow& nominal,
                                                           bool trace = false) {
  const TransformedInstance t = convex_transform(net, nominal);
  auto flow = solve_min_cost_flow(t.base, trace);
  if (!flow) return std::nullopt;
  ReactiveFlow result{t.map_back(*flow), to_int64(flow_cost(t.base, *flow) + t.offset_cost)};
  if (result.cost != distance(result.flow, nominal, DistanceKind::Value))
    throw NumericalError("reactive transformation cost disagrees with the value distance");
  return result;
}

/// Any feasible flow (zero cost objective); free flow value for max-flow networks.
inline std::optional<IntegerFlow> find_feasible_flow(const FlowNetwork& net) {
  if (net.kind() == NetworkKind::MinCostFlow) {
    NetworkBuilder builder(NetworkKind::MinCostFlow);
    for (NodeId v = 0; v < net.node_count(); ++v) builder.add_node(net.node_name(v));
    for (const auto& arc : net.arcs()) builder.add_arc(arc.tail, arc.head, arc.lower, arc.upper, 0);
    for (NodeId v = 0; v < net.node_count(); ++v) builder.set_balance(v, net.balance(v));
    return solve_min_cost_flow(builder.build());
  }
  NetworkBuilder builder(NetworkKind::MinCostFlow);
  for (NodeId v = 0; v < net.node_count(); ++v) builder.add_node(net.node_name(v));
  for (const auto& arc : net.arcs()) builder.add_arc(arc.tail, arc.head, arc.lower, arc.upper, 0);
  const std::int64_t cap = circulation_bound(net);
  builder.add_arc(*net.sink(), *net.source(), 0, cap, 0);
  builder.add_arc(*net.source(), *net.sink(), 0, cap, 0);
  auto flow = solve_min_cost_flow(builder.build());
  if (!flow) return std::nullopt;
  std::vector<std::int64_t> values(flow->values().begin(), flow->values().end() - 2);
  return IntegerFlow(std::move(values));
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

struct BruteForceObjective {
  enum class Kind { MinCost, MaxValue, MinDistance };
  Kind kind = Kind::MinCost;
  IntegerFlow reference;
  DistanceKind distance = DistanceKind::Value;

  static BruteForceObjective min_cost() { return {Kind::MinCost, {}, DistanceKind::Value}; }
  static BruteForceObjective max_value() { return {Kind::MaxValue, {}, DistanceKind::Value}; }
  static BruteForceObjective min_distance(IntegerFlow reference, DistanceKind kind) {
    return {Kind::MinDistance, std::move(reference), kind};
  }
};

struct BruteForceOptions {
  std::uint64_t budget = 20'000'000;  // max number of enumerated candidates
};

namespace detail {

inline std::uint64_t enumeration_size(const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi,
                                      std::uint64_t limit) {
  std::uint64_t size = 1;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    const auto span = static_cast<std::uint64_t>(hi[a] - lo[a] + 1);
    if (size > limit / span) return limit + 1;
    size *= span;
  }
  return size;
}

/// Objective as a rational to minimize.
inline Rational brute_force_score(const FlowNetwork& net, const BruteForceObjective& obj, const IntegerFlow& f) {
  switch (obj.kind) {
    case BruteForceObjective::Kind::MinCost:
      return flow_cost(net, f);
    case BruteForceObjective::Kind::MaxValue:
      return Rational(-flow_value(net, f));
    case BruteForceObjective::Kind::MinDistance:
      return Rational(distance(f, obj.reference, obj.distance));
  }
  return 0;
}

/// Support enumeration for structure distance: the distance only depends on
/// which arcs carry flow, so every support pattern is tried in lexicographic
/// order and checked for a feasible flow realizing it.
inline std::optional<IntegerFlow> brute_force_supports(const FlowNetwork& net, const IntegerFlow& reference) {
  const std::size_t arcs = net.arc_count();
  const bool free_terminals = net.kind() == NetworkKind::MaxFlow;
  std::optional<IntegerFlow> best;
  std::int64_t best_score = std::numeric_limits<std::int64_t>::max();
  std::vector<bool> on(arcs, false);
  std::vector<int> in_count(net.node_count(), 0), out_count(net.node_count(), 0);
  auto plausible = [&]() {
    for (NodeId v = 0; v < net.node_count(); ++v) {
      if (free_terminals && (v == *net.source() || v == *net.sink())) continue;
      const auto b = net.balance(v);
      if (b > 0 && out_count[v] == 0) return false;
      if (b < 0 && in_count[v] == 0) return false;
      if (b == 0 && ((in_count[v] > 0) != (out_count[v] > 0))) return false;
    }
    return true;
  };
  const std::uint64_t total = std::uint64_t{1} << arcs;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    // Arc 0 is the most significant position so masks increase lexicographically.
    bool ok = true;
    std::int64_t score = 0;
    std::fill(in_count.begin(), in_count.end(), 0);
    std::fill(out_count.begin(), out_count.end(), 0);
    for (std::size_t a = 0; a < arcs; ++a) {
      on[a] = (mask >> (arcs - 1 - a)) & 1U;
      const Arc& arc = net.arc(a);
      if (on[a] && arc.upper.is_finite() && arc.upper.value() < 1) ok = false;
      if (!on[a] && arc.lower > 0) ok = false;
      if (on[a]) {
        ++out_count[arc.tail];
        ++in_count[arc.head];
      }
      score += on[a] != (reference[a] > 0) ? 1 : 0;
    }
    if (!ok || score >= best_score || !plausible()) continue;
    NetworkBuilder builder(net.kind());
    for (NodeId v = 0; v < net.node_count(); ++v) builder.add_node(net.node_name(v));
    for (ArcId a = 0; a < arcs; ++a) {
      const Arc& arc = net.arc(a);
      if (on[a])
        builder.add_arc(arc.tail, arc.head, std::max<std::int64_t>(arc.lower, 1), arc.upper, arc.cost);
      else
        builder.add_arc(arc.tail, arc.head, 0, 0, arc.cost);
    }
    for (NodeId v = 0; v < net.node_count(); ++v) builder.set_balance(v, net.balance(v));
    if (net.has_terminals()) builder.set_terminals(*net.source(), *net.sink());
    auto flow = find_feasible_flow(builder.build());
    if (flow) {
      best = std::move(flow);
      best_score = score;
    }
  }
  return best;
}

}  // namespace detail

/// Exhaustive enumeration of integer arc values (each arc within its bounds,
/// infinite capacities capped at circulation_bound), filtered by feasibility.
/// Returns the lexicographically smallest optimum, or nullopt when nothing is
/// feasible. Structure-distance objectives fall back to enumerating supports
/// when the value space exceeds the budget. Throws BudgetError otherwise.
inline std::optional<IntegerFlow> brute_force_flows(const FlowNetwork& net, const BruteForceObjective& objective,
                                                    const BruteForceOptions& options = {}) {
  const std::size_t arcs = net.arc_count();
  if (objective.kind == BruteForceObjective::Kind::MinDistance) require_same_arcs(net, objective.reference);
  if (objective.kind == BruteForceObjective::Kind::MaxValue && !net.has_terminals())
    throw StructuralError("max-value objective needs a source and a sink");
  const std::int64_t cap = circulation_bound(net);
  std::vector<std::int64_t> lo(arcs), hi(arcs);
  for (ArcId a = 0; a < arcs; ++a) {
    lo[a] = net.arc(a).lower;
    hi[a] = net.arc(a).upper.value_or(cap);
  }
  if (detail::enumeration_size(lo, hi, options.budget) > options.budget) {
    const bool support_mode = objective.kind == BruteForceObjective::Kind::MinDistance &&
                              objective.distance == DistanceKind::Structure && arcs < 63 &&
                              (std::uint64_t{1} << arcs) <= options.budget;
    if (support_mode) return detail::brute_force_supports(net, objective.reference);
    throw BudgetError("flow enumeration exceeds the budget of " + std::to_string(options.budget));
  }

  // Depth-first over arcs in index order; a node's conservation is checked as
  // soon as its last incident arc is fixed.
  const bool free_terminals = net.kind() == NetworkKind::MaxFlow;
  std::vector<std::vector<NodeId>> closes(arcs);
  {
    std::vector<std::optional<ArcId>> last(net.node_count());
    for (ArcId a = 0; a < arcs; ++a) {
      last[net.arc(a).tail] = a;
      last[net.arc(a).head] = a;
    }
    for (NodeId v = 0; v < net.node_count(); ++v) {
      if (free_terminals && (v == *net.source() || v == *net.sink())) continue;
      if (last[v]) closes[*last[v]].push_back(v);
    }
  }
  for (NodeId v = 0; v < net.node_count(); ++v) {
    const bool isolated = std::none_of(net.arcs().begin(), net.arcs().end(),
                                       [v](const Arc& arc) { return arc.tail == v || arc.head == v; });
    const bool terminal = free_terminals && (v == *net.source() || v == *net.sink());
    if (isolated && !terminal && net.balance(v) != 0) return std::nullopt;
  }

  std::vector<std::int64_t> current(arcs, 0), outflow(net.node_count(), 0);
  std::optional<IntegerFlow> best;
  Rational best_score;
  std::function<void(std::size_t)> recurse = [&](std::size_t a) {
    if (a == arcs) {
      IntegerFlow candidate(current);
      Rational score = detail::brute_force_score(net, objective, candidate);
      if (!best || score < best_score) {
        best = std::move(candidate);
        best_score = std::move(score);
      }
      return;
    }
    const Arc& arc = net.arc(a);
    for (std::int64_t x = lo[a]; x <= hi[a]; ++x) {
      current[a] = x;
      outflow[arc.tail] += x;
      outflow[arc.head] -= x;
      bool ok = true;
      for (NodeId v : closes[a])
        if (outflow[v] != net.balance(v)) ok = false;
      if (ok) recurse(a + 1);
      outflow[arc.tail] -= x;
      outflow[arc.head] += x;
    }
    current[a] = 0;
  };
  recurse(0);
  return best;
}

}  // namespace solrob

#endif  // SOLROB_MCFSOLVE_HPP
