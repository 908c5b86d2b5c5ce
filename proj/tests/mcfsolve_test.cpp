#include <gtest/gtest.h>

#include <random>

#include "solrob/mcfsolve.hpp"
#include "test_support.hpp"

using namespace solrob;

TEST(LowerBounds, AllZeroDemandsGiveIdentity) {
  NetworkBuilder b;
  b.add_nodes(3);
  b.add_arc(0, 1, 0, Capacity(2), 1);
  b.add_arc(1, 2, 0, Capacity::infinite(), 3);
  b.set_balance(0, 1);
  b.set_balance(2, -1);
  const auto net = b.build();
  const auto t = eliminate_lower_bounds(net);
  EXPECT_EQ(t.offset_cost, 0);
  EXPECT_EQ(t.base.balances(), net.balances());
  for (ArcId a = 0; a < net.arc_count(); ++a) EXPECT_EQ(t.base.arc(a).upper, net.arc(a).upper);
}

TEST(LowerBounds, SingleArcShiftsBalancesAndCost) {
  NetworkBuilder b;
  b.add_nodes(2);
  b.add_arc(0, 1, 2, Capacity(5), 3);
  b.set_balance(0, 2);
  b.set_balance(1, -2);
  const auto t = eliminate_lower_bounds(b.build());
  EXPECT_EQ(t.base.arc(0).upper, Capacity(3));
  EXPECT_EQ(t.base.balance(0), 0);
  EXPECT_EQ(t.base.balance(1), 0);
  EXPECT_EQ(t.offset_cost, 6);
}

TEST(LowerBoundsProperty, MappedBackFlowsKeepFeasibilityAndCostOffset) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto net = fixtures::random_network(rng, NetworkKind::MinCostFlow);
    const auto t = eliminate_lower_bounds(net);
    std::int64_t sum = 0;
    for (auto b : t.base.balances()) sum += b;
    EXPECT_EQ(sum, 0);
    fixtures::enumerate_feasible(t.base, 3, [&](const IntegerFlow& f) {
      const auto back = t.map_back(f);
      EXPECT_TRUE(is_feasible(net, back));
      EXPECT_EQ(flow_cost(net, back), flow_cost(t.base, f) + t.offset_cost);
    });
  }
}

TEST(MinCostFlow, SingleArcZeroDemandPicksZeroFlow) {
  NetworkBuilder b;
  b.add_nodes(2);
  b.add_arc(0, 1, 0, Capacity(2), 1);
  const auto net = b.build();
  const auto f = solve_min_cost_flow(net);
  ASSERT_TRUE(f);
  EXPECT_EQ(f->values(), std::vector<std::int64_t>{0});
  const auto bf = brute_force_flows(net, BruteForceObjective::min_cost());
  ASSERT_TRUE(bf);
  EXPECT_EQ(bf->values(), std::vector<std::int64_t>{0});
}

TEST(MinCostFlow, InfeasibleIsAValue) {
  NetworkBuilder b;
  b.add_nodes(2);
  b.add_arc(0, 1, 0, Capacity(1), 1);
  b.set_balance(0, 2);
  b.set_balance(1, -2);
  EXPECT_FALSE(solve_min_cost_flow(b.build()).has_value());
}

TEST(MinCostFlow, UnboundedNegativeCycleThrows) {
  NetworkBuilder b;
  b.add_nodes(2);
  b.add_arc(0, 1, 0, Capacity::infinite(), -1);
  b.add_arc(1, 0, 0, Capacity::infinite(), 0);
  EXPECT_THROW(solve_min_cost_flow(b.build()), UnboundedError);
}

TEST(MinCostFlow, NegativeCostsWithFiniteCapacities) {
  NetworkBuilder b;
  b.add_nodes(3);
  b.add_arc(0, 1, 0, Capacity(2), -3);
  b.add_arc(1, 2, 0, Capacity(3), 1);
  b.add_arc(2, 0, 0, Capacity(1), 1);
  const auto f = solve_min_cost_flow(b.build());
  ASSERT_TRUE(f);
  EXPECT_EQ(flow_cost(b.build(), *f), -1);
}

TEST(MaxFlow, ZeroCapacityOutOfSourceGivesZero) {
  NetworkBuilder b(NetworkKind::MaxFlow);
  b.add_nodes(3);
  b.add_arc(0, 1, 0, Capacity(0), 0);
  b.add_arc(1, 2, 0, Capacity(4), 0);
  b.set_terminals(0, 2);
  const auto net = b.build();
  const auto f = solve_max_flow(net);
  ASSERT_TRUE(f);
  EXPECT_EQ(flow_value(net, *f), 0);
}

TEST(MaxFlow, DiamondNetwork) {
  NetworkBuilder b(NetworkKind::MaxFlow);
  b.add_nodes(4);
  b.add_arc(0, 1, 0, Capacity(3), 0);
  b.add_arc(0, 2, 0, Capacity(2), 0);
  b.add_arc(1, 2, 0, Capacity(1), 0);
  b.add_arc(1, 3, 0, Capacity(2), 0);
  b.add_arc(2, 3, 0, Capacity::infinite(), 0);
  b.set_terminals(0, 3);
  const auto net = b.build();
  const auto f = solve_max_flow(net);
  ASSERT_TRUE(f);
  EXPECT_TRUE(is_feasible(net, *f));
  EXPECT_EQ(flow_value(net, *f), 5);
}

TEST(MaxFlow, InfinitePathThrows) {
  NetworkBuilder b(NetworkKind::MaxFlow);
  b.add_nodes(2);
  b.add_arc(0, 1, 0, Capacity::infinite(), 0);
  b.set_terminals(0, 1);
  EXPECT_THROW(solve_max_flow(b.build()), UnboundedError);
}

TEST(Reactive, UnchangedBoundsReturnTheNominal) {
  NetworkBuilder b;
  b.add_nodes(3);
  b.add_arc(0, 1, 0, Capacity(3), 1);
  b.add_arc(1, 2, 0, Capacity(3), 1);
  b.add_arc(0, 2, 0, Capacity(3), 5);
  b.set_balance(0, 2);
  b.set_balance(2, -2);
  const auto net = b.build();
  const IntegerFlow nominal(std::vector<std::int64_t>{1, 1, 1});
  const auto r = reactive_value_distance(net, nominal);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->cost, 0);
  EXPECT_EQ(r->flow.values(), nominal.values());
}

TEST(Reactive, ForcedDemandIsChargedThroughTheOffset) {
  NetworkBuilder b;
  b.add_nodes(2);
  b.add_arc(0, 1, 3, Capacity(5), 0);
  b.add_arc(1, 0, 0, Capacity(5), 0);
  const auto net = b.build();
  const auto r = reactive_value_distance(net, IntegerFlow(std::vector<std::int64_t>{1, 1}));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->cost, 4);
  EXPECT_EQ(r->flow.values(), (std::vector<std::int64_t>{3, 3}));
}

namespace {

// Lexicographically smallest optimum by plain enumeration.
std::optional<IntegerFlow> naive_argmin(const FlowNetwork& net, std::int64_t inf_cap,
                                        const std::function<Rational(const IntegerFlow&)>& score) {
  std::optional<IntegerFlow> best;
  Rational best_score;
  fixtures::enumerate_feasible(net, inf_cap, [&](const IntegerFlow& f) {
    const Rational s = score(f);
    if (!best || s < best_score) {
      best = f;
      best_score = s;
    }
  });
  return best;
}

}  // namespace

TEST(MinCostFlowProperty, MatchesEnumeration) {
  std::mt19937_64 rng(101);
  int feasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const auto net = fixtures::random_network(rng, NetworkKind::MinCostFlow);
    const auto oracle = fixtures::naive_minimum(net, 0, [&](const IntegerFlow& f) { return flow_cost(net, f); });
    const auto f = solve_min_cost_flow(net);
    ASSERT_EQ(f.has_value(), oracle.has_value()) << "trial " << trial;
    if (!f) continue;
    ++feasible;
    EXPECT_TRUE(is_feasible(net, *f));
    EXPECT_EQ(flow_cost(net, *f), *oracle) << "trial " << trial;
  }
  EXPECT_GE(feasible, 100);
}

TEST(MinCostFlowProperty, InfiniteCapacitiesMatchTruncatedEnumeration) {
  fixtures::RandomNetworkOptions opt;
  opt.allow_infinite = true;
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const auto net = fixtures::random_network(rng, NetworkKind::MinCostFlow, opt);
    // Costs are nonnegative, so some optimum uses at most the circulation bound per arc.
    const auto oracle = fixtures::naive_minimum(net, std::min<std::int64_t>(circulation_bound(net), 6),
                                               [&](const IntegerFlow& f) { return flow_cost(net, f); });
    const auto f = solve_min_cost_flow(net);
    if (!oracle) continue;
    ASSERT_TRUE(f);
    EXPECT_EQ(flow_cost(net, *f), *oracle);
  }
}

TEST(BruteForceProperty, AgreesWithPlainEnumerationIncludingTieBreak) {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 150; ++trial) {
    const bool mf = trial % 3 == 0;
    const auto net = fixtures::random_network(rng, mf ? NetworkKind::MaxFlow : NetworkKind::MinCostFlow);
    const IntegerFlow ref = fixtures::random_flow(rng, net, 3);
    std::vector<std::pair<BruteForceObjective, std::function<Rational(const IntegerFlow&)>>> objectives;
    objectives.push_back({BruteForceObjective::min_distance(ref, DistanceKind::Value),
                          [&](const IntegerFlow& f) { return Rational(distance(f, ref, DistanceKind::Value)); }});
    objectives.push_back({BruteForceObjective::min_distance(ref, DistanceKind::Structure),
                          [&](const IntegerFlow& f) { return Rational(distance(f, ref, DistanceKind::Structure)); }});
    if (mf)
      objectives.push_back({BruteForceObjective::max_value(),
                            [&](const IntegerFlow& f) { return Rational(-flow_value(net, f)); }});
    else
      objectives.push_back({BruteForceObjective::min_cost(), [&](const IntegerFlow& f) { return flow_cost(net, f); }});
    for (const auto& [objective, score] : objectives) {
      const auto expected = naive_argmin(net, 0, score);
      const auto got = brute_force_flows(net, objective);
      ASSERT_EQ(got.has_value(), expected.has_value());
      if (got) {
        EXPECT_EQ(got->values(), expected->values()) << "trial " << trial;
      }
    }
  }
}

TEST(BruteForce, BudgetIsEnforced) {
  NetworkBuilder b;
  b.add_nodes(2);
  for (int i = 0; i < 10; ++i) b.add_arc(0, 1, 0, Capacity(9), 1);
  const auto net = b.build();
  BruteForceOptions small;
  small.budget = 1000;
  EXPECT_THROW(brute_force_flows(net, BruteForceObjective::min_cost(), small), BudgetError);
}

TEST(BruteForce, SupportModeMatchesValueEnumeration) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 80; ++trial) {
    const auto net = fixtures::random_network(rng, NetworkKind::MinCostFlow);
    const IntegerFlow ref = fixtures::random_flow(rng, net, 3);
    const auto objective = BruteForceObjective::min_distance(ref, DistanceKind::Structure);
    const auto full = brute_force_flows(net, objective);
    const auto supports = detail::brute_force_supports(net, ref);
    ASSERT_EQ(full.has_value(), supports.has_value());
    if (full) {
      EXPECT_EQ(distance(*full, ref, DistanceKind::Structure), distance(*supports, ref, DistanceKind::Structure));
    }
  }
}

TEST(ReactiveProperty, ValueDistanceMatchesEnumeration) {
  std::mt19937_64 rng(505);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const bool mf = trial % 2 == 0;
    const auto net = fixtures::random_network(rng, mf ? NetworkKind::MaxFlow : NetworkKind::MinCostFlow);
    const IntegerFlow nominal = fixtures::random_flow(rng, net, 3);
    const auto oracle = fixtures::naive_minimum(
        net, 0, [&](const IntegerFlow& f) { return Rational(distance(f, nominal, DistanceKind::Value)); });
    const auto r = reactive_value_distance(net, nominal);
    ASSERT_EQ(r.has_value(), oracle.has_value());
    if (!r) continue;
    ++solved;
    EXPECT_TRUE(is_feasible(net, r->flow));
    EXPECT_EQ(Rational(r->cost), *oracle) << "trial " << trial;
  }
  EXPECT_GE(solved, 100);
}
