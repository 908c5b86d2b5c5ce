#include <gtest/gtest.h>

#include <random>

#include "solrob/mcfsolve.hpp"
#include "solrob/robustmodels.hpp"
#include "test_support.hpp"

using namespace solrob;
using fixtures::enumerate_feasible;
using fixtures::naive_minimum;
using fixtures::random_network;

namespace {

std::int64_t pick(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// One to three scenarios overriding random arcs; demands stay within u.
FlowScenarioSet random_scenarios(std::mt19937_64& rng, const FlowNetwork& net) {
  const bool mcf = net.kind() == NetworkKind::MinCostFlow;
  FlowScenarioSet set(mcf ? UncertaintyKind::Demand : UncertaintyKind::Capacity);
  const auto count = pick(rng, 1, 3);
  for (std::int64_t i = 0; i < count; ++i) {
    Scenario sc;
    sc.id = "s" + std::to_string(i + 1);
    sc.weight = pick(rng, 0, 3) == 0 ? Rational(1, 2) : Rational(pick(rng, 1, 3));
    for (ArcId a = 0; a < net.arc_count(); ++a) {
      if (pick(rng, 0, 2) != 0) continue;
      if (mcf)
        sc.overrides[a] = pick(rng, 0, net.arc(a).upper.value());
      else
        sc.overrides[a] = pick(rng, 0, 3);
    }
    set.add(std::move(sc));
  }
  return set;
}

struct Oracle {
  bool nominal_feasible = false;
  bool scenarios_feasible = true;
  std::optional<Rational> cost;  // nullopt: anchor admits no flow
};

/// Exhaustive proactive optimum: every anchored nominal flow against every
/// feasible flow of every scenario.
Oracle proactive_oracle(const FlowNetwork& net, const RobustSpec& spec) {
  Oracle out;
  std::vector<IntegerFlow> nominal;
  enumerate_feasible(net, 0, [&](const IntegerFlow& f) { nominal.push_back(f); });
  if (nominal.empty()) return out;
  out.nominal_feasible = true;
  const bool mcf = net.kind() == NetworkKind::MinCostFlow;
  auto objective = [&](const IntegerFlow& f) { return mcf ? flow_cost(net, f) : Rational(flow_value(net, f)); };
  Rational c_star = objective(nominal.front());
  for (const auto& f : nominal) c_star = mcf ? std::min(c_star, objective(f)) : std::max(c_star, objective(f));
  std::vector<std::vector<IntegerFlow>> per_scenario(spec.scenarios.size());
  for (std::size_t i = 0; i < spec.scenarios.size(); ++i) {
    enumerate_feasible(spec.scenarios.apply(net, i), 0, [&](const IntegerFlow& f) { per_scenario[i].push_back(f); });
    if (per_scenario[i].empty()) out.scenarios_feasible = false;
  }
  if (!out.scenarios_feasible) return out;
  const Rational eps = spec.anchor.epsilon;
  for (const auto& xp : nominal) {
    const Rational v = objective(xp);
    const bool anchored = mcf ? v <= c_star * (1 + eps) : v >= ceil(c_star * (1 - eps));
    if (!anchored) continue;
    Rational total = 0;
    for (std::size_t i = 0; i < per_scenario.size(); ++i) {
      std::int64_t best = -1;
      for (const auto& xi : per_scenario[i]) {
        const auto d = distance(xp, xi, spec.distance);
        if (best < 0 || d < best) best = d;
      }
      total += spec.scenarios[i].weight * best;
    }
    if (!out.cost || total < *out.cost) out.cost = total;
  }
  return out;
}

fixtures::RandomNetworkOptions tiny() {
  fixtures::RandomNetworkOptions opt;
  opt.max_nodes = 4;
  opt.max_arcs = 5;
  opt.max_capacity = 2;
  return opt;
}

/// s -> a -> t and s -> t, supply 2, the direct arc costs more.
FlowNetwork diamond() {
  NetworkBuilder b;
  const auto s = b.add_node("s"), a = b.add_node("a"), t = b.add_node("t");
  b.add_arc(s, a, 0, 2, 1);
  b.add_arc(a, t, 0, 2, 1);
  b.add_arc(s, t, 0, 2, 3);
  b.set_balance(s, 2);
  b.set_balance(t, -2);
  return b.build();
}

}  // namespace

TEST(RobustSpec, RejectsBadAnchorsAndScenarioKinds) {
  const auto net = diamond();
  RobustSpec spec;
  spec.anchor = Anchor::relaxed(Rational(-1, 10));
  EXPECT_THROW(spec.validate(net), ConfigError);
  spec.anchor = Anchor{Anchor::Mode::Exact, Rational(1, 10)};
  EXPECT_THROW(spec.validate(net), ConfigError);
  spec.anchor = Anchor::exact();
  spec.scenarios = FlowScenarioSet(UncertaintyKind::Capacity);
  spec.scenarios.add(Scenario{"c", 1, {{0, 1}}});
  EXPECT_THROW(spec.validate(net), StructuralError);
  spec.scenarios = FlowScenarioSet(UncertaintyKind::Demand);
  spec.scenarios.add(Scenario{"d", 1, {{0, 3}}});  // above u
  EXPECT_THROW(spec.validate(net), StructuralError);
}

TEST(Proactive, EmptyScenarioSetCostsNothing) {
  const auto net = diamond();
  const auto sol = solve_proactive(net, RobustSpec{});
  ASSERT_EQ(sol.status, RobustStatus::Optimal);
  EXPECT_EQ(sol.cost, 0);
  EXPECT_EQ(sol.c_star, 4);
  EXPECT_EQ(flow_cost(net, sol.nominal), 4);
}

TEST(Proactive, ModelCarriesAnchorRow) {
  const auto net = diamond();
  RobustSpec spec;
  spec.scenarios.add(Scenario{"d", 1, {{2, 1}}});
  const auto pm = build_proactive_model(net, spec, 4);
  bool found = false;
  for (const auto& c : pm.model.constraints())
    if (c.name == "anchor") {
      found = true;
      EXPECT_EQ(c.relation, milp::Relation::Equal);
      EXPECT_EQ(c.rhs, 4);
    }
  EXPECT_TRUE(found);
  // One unit forced onto the direct arc moves off both arcs of the cheap path.
  const auto sol = solve_proactive(net, spec);
  EXPECT_EQ(sol.cost, 3);
}

TEST(Proactive, ReportsWhichPartIsInfeasible) {
  NetworkBuilder b;
  const auto s = b.add_node("s"), t = b.add_node("t");
  b.add_arc(s, t, 0, 1, 1);
  b.set_balance(s, 2);
  b.set_balance(t, -2);
  EXPECT_EQ(solve_proactive(b.build(), RobustSpec{}).infeasible_part, "nominal");

  const auto net = diamond();
  RobustSpec spec;
  spec.scenarios.add(Scenario{"tight", 1, {{0, 2}, {2, 2}}});  // 4 units demanded, 2 supplied
  const auto sol = solve_proactive(net, spec);
  EXPECT_EQ(sol.status, RobustStatus::Infeasible);
  EXPECT_EQ(sol.infeasible_part, "scenario tight");
}

TEST(Proactive, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(2024);
  int compared = 0;
  for (int trial = 0; trial < 400 && compared < 120; ++trial) {
    const auto kind = trial % 3 == 2 ? NetworkKind::MaxFlow : NetworkKind::MinCostFlow;
    const auto net = random_network(rng, kind, tiny());
    RobustSpec spec;
    spec.distance = trial % 2 ? DistanceKind::Structure : DistanceKind::Value;
    spec.scenarios = random_scenarios(rng, net);
    if (trial % 4 == 3) spec.anchor = Anchor::relaxed(Rational(pick(rng, 1, 4), 4));
    const Oracle oracle = proactive_oracle(net, spec);
    const auto sol = solve_proactive(net, spec);
    if (!oracle.nominal_feasible) {
      EXPECT_EQ(sol.infeasible_part, "nominal") << trial;
      continue;
    }
    if (!oracle.scenarios_feasible) {
      EXPECT_EQ(sol.infeasible_part.rfind("scenario", 0), 0u) << trial;
      continue;
    }
    ASSERT_TRUE(oracle.cost.has_value());
    ASSERT_EQ(sol.status, RobustStatus::Optimal) << trial;
    EXPECT_EQ(sol.cost, *oracle.cost) << "trial " << trial;
    ++compared;
  }
  EXPECT_GE(compared, 100);
}

TEST(Proactive, ScenarioFlowsAreReactiveOptimal) {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 40; ++trial) {
    const auto kind = trial % 2 ? NetworkKind::MaxFlow : NetworkKind::MinCostFlow;
    const auto net = random_network(rng, kind);
    RobustSpec spec;
    spec.distance = trial % 3 == 0 ? DistanceKind::Structure : DistanceKind::Value;
    spec.scenarios = random_scenarios(rng, net);
    const auto sol = solve_proactive(net, spec);
    if (sol.status != RobustStatus::Optimal) continue;
    for (std::size_t i = 0; i < spec.scenarios.size(); ++i) {
      const auto re = solve_reactive(spec.scenarios.apply(net, i), sol.nominal, spec.distance);
      ASSERT_EQ(re.status, RobustStatus::Optimal);
      EXPECT_EQ(sol.distances[i], re.cost) << trial << " scenario " << i;
    }
    ++checked;
  }
  EXPECT_GE(checked, 30);
}

TEST(Proactive, DominatesAnyFixedNominalOptimum) {
  std::mt19937_64 rng(91);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 40; ++trial) {
    const auto net = random_network(rng, NetworkKind::MinCostFlow);
    const auto fixed = solve_min_cost_flow(net);
    if (!fixed) continue;
    RobustSpec spec;
    spec.distance = trial % 2 ? DistanceKind::Structure : DistanceKind::Value;
    spec.scenarios = random_scenarios(rng, net);
    const auto sol = solve_proactive(net, spec);
    if (sol.status != RobustStatus::Optimal) continue;
    Rational reactive_sum = 0;
    for (std::size_t i = 0; i < spec.scenarios.size(); ++i)
      reactive_sum +=
          spec.scenarios[i].weight * solve_reactive(spec.scenarios.apply(net, i), *fixed, spec.distance).cost;
    EXPECT_LE(sol.cost, reactive_sum) << trial;
    ++checked;
  }
  EXPECT_GE(checked, 30);
}

TEST(Proactive, CostIsNonincreasingInEpsilon) {
  std::mt19937_64 rng(5150);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 30; ++trial) {
    const auto kind = trial % 2 ? NetworkKind::MaxFlow : NetworkKind::MinCostFlow;
    const auto net = random_network(rng, kind);
    RobustSpec spec;
    spec.distance = trial % 3 == 0 ? DistanceKind::Structure : DistanceKind::Value;
    spec.scenarios = random_scenarios(rng, net);
    const auto exact = solve_proactive(net, spec);
    if (exact.status != RobustStatus::Optimal) continue;
    Rational previous = exact.cost;
    for (const Rational& eps : {Rational(0), Rational(1, 10), Rational(1, 4), Rational(1, 2), Rational(1)}) {
      spec.anchor = Anchor::relaxed(eps);
      const auto sol = solve_proactive(net, spec);
      ASSERT_EQ(sol.status, RobustStatus::Optimal);
      if (eps == 0) {
        EXPECT_EQ(sol.cost, exact.cost);
      }
      EXPECT_LE(sol.cost, previous) << trial << " eps " << eps;
      previous = sol.cost;
    }
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(Reactive, ValueDistanceAgreesAcrossSolvers) {
  std::mt19937_64 rng(31337);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto kind = trial % 3 == 2 ? NetworkKind::MaxFlow : NetworkKind::MinCostFlow;
    const auto net = random_network(rng, kind);
    const auto nominal = fixtures::random_flow(rng, net, 3);
    const auto naive = naive_minimum(net, 0, [&](const IntegerFlow& f) {
      return Rational(distance(f, nominal, DistanceKind::Value));
    });
    const auto poly = reactive_value_distance(net, nominal);
    const auto milp = solve_reactive(net, nominal, DistanceKind::Value);
    ASSERT_EQ(naive.has_value(), poly.has_value()) << trial;
    ASSERT_EQ(naive.has_value(), milp.status == RobustStatus::Optimal) << trial;
    if (!naive) continue;
    EXPECT_EQ(*naive, poly->cost) << trial;
    EXPECT_EQ(*naive, milp.cost) << trial;
    ++compared;
  }
  EXPECT_GE(compared, 100);
}

TEST(Reactive, StructureDistanceMatchesEnumeration) {
  std::mt19937_64 rng(4242);
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto kind = trial % 2 ? NetworkKind::MaxFlow : NetworkKind::MinCostFlow;
    const auto net = random_network(rng, kind);
    const auto nominal = fixtures::random_flow(rng, net, 3);
    const auto naive = naive_minimum(net, 0, [&](const IntegerFlow& f) {
      return Rational(distance(f, nominal, DistanceKind::Structure));
    });
    const auto milp = solve_reactive(net, nominal, DistanceKind::Structure);
    ASSERT_EQ(naive.has_value(), milp.status == RobustStatus::Optimal) << trial;
    if (!naive) continue;
    EXPECT_EQ(*naive, milp.cost) << trial;
    ++compared;
  }
  EXPECT_GE(compared, 80);
}

TEST(Reactive, FeasibleNominalNeedsNoRepair) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto net = random_network(rng, NetworkKind::MinCostFlow);
    const auto f = solve_min_cost_flow(net);
    if (!f) continue;
    for (auto kind : {DistanceKind::Value, DistanceKind::Structure}) {
      const auto re = solve_reactive(net, *f, kind);
      EXPECT_EQ(re.cost, 0);
      if (kind == DistanceKind::Value) {
        EXPECT_EQ(re.flow, *f);
      }
    }
  }
}
