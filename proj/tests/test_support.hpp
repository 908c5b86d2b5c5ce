#ifndef SOLROB_TESTS_TEST_SUPPORT_HPP
#define SOLROB_TESTS_TEST_SUPPORT_HPP

// Generators and naive oracles shared by the unit and acceptance suites.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "solrob/netcore.hpp"

namespace solrob::fixtures {

inline std::string data_path(const std::string& name) { return std::string(SOLROB_DATA_DIR) + "/" + name; }

struct RandomNetworkOptions {
  std::size_t max_nodes = 6;
  std::size_t max_arcs = 8;
  std::int64_t max_capacity = 3;
  bool allow_infinite = false;
  bool with_lower_bounds = true;
  bool fractional_costs = true;
};

/// Random small network. Balances come from a random bounded flow most of
/// the time, so the instance is usually feasible but not always.
inline FlowNetwork random_network(std::mt19937_64& rng, NetworkKind kind, const RandomNetworkOptions& opt = {}) {
  auto pick = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
  const std::size_t n = static_cast<std::size_t>(pick(2, static_cast<std::int64_t>(opt.max_nodes)));
  const std::size_t m = static_cast<std::size_t>(pick(1, static_cast<std::int64_t>(opt.max_arcs)));
  NetworkBuilder b(kind);
  b.add_nodes(n);
  std::vector<std::int64_t> flow_lo(m), flow_hi(m);
  std::vector<std::pair<NodeId, NodeId>> ends(m);
  for (std::size_t a = 0; a < m; ++a) {
    NodeId u = static_cast<NodeId>(pick(0, n - 1));
    NodeId v = static_cast<NodeId>(pick(0, n - 2));
    if (v >= u) ++v;
    ends[a] = {u, v};
    const std::int64_t cap = pick(0, opt.max_capacity);
    const std::int64_t lower = (kind == NetworkKind::MinCostFlow && opt.with_lower_bounds && pick(0, 3) == 0) ? pick(0, cap) : 0;
    const bool inf = opt.allow_infinite && pick(0, 5) == 0;
    Rational cost = pick(0, 4);
    if (opt.fractional_costs && pick(0, 4) == 0) cost += Rational(1, 2);
    if (kind == NetworkKind::MaxFlow) cost = 0;
    b.add_arc(u, v, lower, inf ? Capacity::infinite() : Capacity(cap), cost);
    flow_lo[a] = lower;
    flow_hi[a] = inf ? opt.max_capacity : cap;
  }
  if (kind == NetworkKind::MaxFlow) {
    b.set_terminals(0, n - 1);
    return b.build();
  }
  std::vector<std::int64_t> bal(n, 0);
  if (pick(0, 4) != 0) {
    for (std::size_t a = 0; a < m; ++a) {
      const std::int64_t f = pick(flow_lo[a], flow_hi[a]);
      bal[ends[a].first] += f;
      bal[ends[a].second] -= f;
    }
  } else {
    const NodeId s = static_cast<NodeId>(pick(0, n - 1));
    NodeId t = static_cast<NodeId>(pick(0, n - 2));
    if (t >= s) ++t;
    const std::int64_t amount = pick(0, 3);
    bal[s] += amount;
    bal[t] -= amount;
  }
  for (NodeId v = 0; v < n; ++v) b.set_balance(v, bal[v]);
  return b.build();
}

/// Every integer vector in [0, cap] per arc, no pruning; callback sees
/// only feasible flows. Infinite capacities are truncated at `inf_cap`.
inline void enumerate_feasible(const FlowNetwork& net, std::int64_t inf_cap,
                               const std::function<void(const IntegerFlow&)>& visit) {
  const std::size_t m = net.arc_count();
  std::vector<std::int64_t> x(m, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t a) {
    if (a == m) {
      IntegerFlow f(x);
      if (is_feasible(net, f)) visit(f);
      return;
    }
    const std::int64_t hi = net.arc(a).upper.value_or(inf_cap);
    for (std::int64_t v = 0; v <= hi; ++v) {
      x[a] = v;
      rec(a + 1);
    }
  };
  rec(0);
}

/// Minimum of `score` over feasible flows, or nullopt when none exists.
inline std::optional<Rational> naive_minimum(const FlowNetwork& net, std::int64_t inf_cap,
                                             const std::function<Rational(const IntegerFlow&)>& score) {
  std::optional<Rational> best;
  enumerate_feasible(net, inf_cap, [&](const IntegerFlow& f) {
    const Rational s = score(f);
    if (!best || s < *best) best = s;
  });
  return best;
}

inline IntegerFlow random_flow(std::mt19937_64& rng, const FlowNetwork& net, std::int64_t inf_cap) {
  std::vector<std::int64_t> x(net.arc_count());
  for (ArcId a = 0; a < net.arc_count(); ++a)
    x[a] = std::uniform_int_distribution<std::int64_t>(0, net.arc(a).upper.value_or(inf_cap))(rng);
  return IntegerFlow(x);
}

}  // namespace solrob::fixtures

#endif  // SOLROB_TESTS_TEST_SUPPORT_HPP
