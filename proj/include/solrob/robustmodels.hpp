#ifndef SOLROB_ROBUSTMODELS_HPP
#define SOLROB_ROBUSTMODELS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "solrob/error.hpp"
#include "solrob/mcfsolve.hpp"
#include "solrob/milp/backend.hpp"
#include "solrob/milp/model.hpp"
#include "solrob/netcore.hpp"

namespace solrob {

/// How the proactive nominal solution is tied to the nominal optimum c*.
struct Anchor {
  enum class Mode { Exact, Relaxed };
  Mode mode = Mode::Exact;
  Rational epsilon = 0;

  static Anchor exact() { return {}; }
  static Anchor relaxed(Rational eps) { return {Mode::Relaxed, std::move(eps)}; }

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

struct RobustSpec {
  DistanceKind distance = DistanceKind::Value;
  FlowScenarioSet scenarios;
  Anchor anchor;

  void validate(const FlowNetwork& net) const {
    if (anchor.epsilon < 0) throw ConfigError("epsilon must be nonnegative");
    if (anchor.mode == Anchor::Mode::Exact && anchor.epsilon != 0)
      throw ConfigError("an exact anchor has no epsilon");
    const auto expected =
        net.kind() == NetworkKind::MinCostFlow ? UncertaintyKind::Demand : UncertaintyKind::Capacity;
    if (!scenarios.empty() && scenarios.kind() != expected)
      throw StructuralError(net.kind() == NetworkKind::MinCostFlow
                                ? "min-cost flow instances take demand scenarios"
                                : "max-flow instances take capacity scenarios");
    scenarios.validate(net);
  }
};

/// Optimal nominal cost (min-cost flow) or value (max-flow).
inline Rational nominal_optimum(const FlowNetwork& net) {
  if (net.kind() == NetworkKind::MinCostFlow) {
    auto f = solve_min_cost_flow(net);
    if (!f) throw InfeasibleError("the nominal instance has no feasible flow");
    return flow_cost(net, *f);
  }
  auto f = solve_max_flow(net);
  if (!f) throw InfeasibleError("the nominal instance has no feasible flow");
  return flow_value(net, *f);
}

/// Variables of one copy of the network inside a model.
struct FlowVars {
  std::vector<milp::VarId> x;
  std::vector<milp::VarId> y;  // support indicators, structure distance only

  IntegerFlow decode(const milp::MilpResult& r) const {
    std::vector<std::int64_t> values(x.size());
    for (std::size_t a = 0; a < x.size(); ++a) values[a] = r.int_value(x[a]);
    return IntegerFlow(std::move(values));
  }
};

namespace detail {

/// Integer arc variables, conservation rows and (optionally) support
/// indicators with x <= U*y, y <= x where U is the arc's upper bound.
inline FlowVars add_flow_copy(milp::MilpModel& model, const FlowNetwork& net, const std::string& tag,
                              std::int64_t cap, bool indicators) {
  using namespace milp;
  FlowVars vars;
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arc(a);
    const std::int64_t hi = std::min(arc.upper.value_or(cap), std::max(cap, arc.lower));
    vars.x.push_back(model.add_integer("x" + tag + "_" + std::to_string(a), arc.lower, Rational(hi)));
  }
  const bool free_terminals = net.kind() == NetworkKind::MaxFlow;
  std::vector<LinearExpr> rows(net.node_count());
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    rows[net.arc(a).tail].add(vars.x[a], 1);
    rows[net.arc(a).head].add(vars.x[a], -1);
  }
  for (NodeId v = 0; v < net.node_count(); ++v) {
    if (free_terminals && (v == *net.source() || v == *net.sink())) continue;
    const std::int64_t b = free_terminals ? 0 : net.balance(v);
    model.add_constraint("bal" + tag + "_" + std::to_string(v), rows[v], Relation::Equal, b);
  }
  if (indicators) {
    for (ArcId a = 0; a < net.arc_count(); ++a) {
      const auto hi = *model.variable(vars.x[a]).upper;
      const VarId y = model.add_binary("y" + tag + "_" + std::to_string(a));
      vars.y.push_back(y);
      if (hi == 0) {
        model.set_bounds(y, Rational(0), Rational(0));
        continue;
      }
      model.add_constraint("use" + tag + "_" + std::to_string(a), LinearExpr().add(vars.x[a], 1).add(y, -hi),
                           Relation::LessEqual, 0);
      model.add_constraint("sup" + tag + "_" + std::to_string(a), LinearExpr().add(y, 1).add(vars.x[a], -1),
                           Relation::LessEqual, 0);
    }
  }
  return vars;
}

/// Nominal objective f(x) of the network copy: cost or flow value.
inline milp::LinearExpr nominal_objective(const FlowNetwork& net, const FlowVars& vars) {
  milp::LinearExpr e;
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    const Arc& arc = net.arc(a);
    if (net.kind() == NetworkKind::MinCostFlow) {
      e.add(vars.x[a], arc.cost);
    } else {
      if (arc.tail == *net.source()) e.add(vars.x[a], 1);
      if (arc.head == *net.source()) e.add(vars.x[a], -1);
    }
  }
  return e;
}

inline void check_support_indicators(const FlowVars& vars, const milp::MilpResult& r) {
  for (std::size_t a = 0; a < vars.y.size(); ++a)
    if ((r.int_value(vars.y[a]) == 1) != (r.int_value(vars.x[a]) >= 1))
      throw NumericalError("support indicator of arc " + std::to_string(a) + " disagrees with its flow");
}

}  // namespace detail

struct ProactiveModel {
  milp::MilpModel model;
  FlowVars nominal;
  std::vector<FlowVars> scenarios;
  Rational c_star;
};

/// Weighted sum of distances between one nominal copy and one copy per
/// scenario, with the nominal copy anchored at c* (or within epsilon of it).
inline ProactiveModel build_proactive_model(const FlowNetwork& net, const RobustSpec& spec, const Rational& c_star) {
  using namespace milp;
  spec.validate(net);
  const bool structure = spec.distance == DistanceKind::Structure;
  ProactiveModel pm;
  pm.c_star = c_star;
  const std::int64_t cap = circulation_bound(net);
  pm.nominal = solrob::detail::add_flow_copy(pm.model, net, "p", cap, structure);

  const LinearExpr f = solrob::detail::nominal_objective(net, pm.nominal);
  if (net.kind() == NetworkKind::MinCostFlow) {
    if (spec.anchor.mode == Anchor::Mode::Exact)
      pm.model.add_constraint("anchor", f, Relation::Equal, c_star);
    else
      pm.model.add_constraint("anchor", f, Relation::LessEqual, c_star * (1 + spec.anchor.epsilon));
  } else {
    if (spec.anchor.mode == Anchor::Mode::Exact)
      pm.model.add_constraint("anchor", f, Relation::Equal, c_star);
    else
      pm.model.add_constraint("anchor", f, Relation::GreaterEqual, ceil(c_star * (1 - spec.anchor.epsilon)));
  }

  LinearExpr objective;
  for (std::size_t i = 0; i < spec.scenarios.size(); ++i) {
    const FlowNetwork sc = spec.scenarios.apply(net, i);
    const std::string tag = std::to_string(i);
    pm.scenarios.push_back(solrob::detail::add_flow_copy(pm.model, sc, tag, circulation_bound(sc) + cap, structure));
    const auto& nom = structure ? pm.nominal.y : pm.nominal.x;
    const auto& cur = structure ? pm.scenarios.back().y : pm.scenarios.back().x;
    const Rational& w = spec.scenarios[i].weight;
    for (ArcId a = 0; a < net.arc_count(); ++a) {
      // nom - cur = plus - minus; at the optimum plus + minus = |nom - cur|.
      const std::string suffix = tag + "_" + std::to_string(a);
      const VarId plus = pm.model.add_continuous("dp" + suffix, Rational(0), std::nullopt);
      const VarId minus = pm.model.add_continuous("dm" + suffix, Rational(0), std::nullopt);
      pm.model.add_constraint("dist" + suffix, LinearExpr().add(nom[a], 1).add(cur[a], -1).add(plus, -1).add(minus, 1),
                              Relation::Equal, 0);
      objective.add(plus, w).add(minus, w);
    }
  }
  pm.model.set_objective(Sense::Minimize, objective);
  return pm;
}

struct ReactiveModel {
  milp::MilpModel model;
  FlowVars vars;
};

/// Closest feasible flow of `net` (already under the scenario) to a fixed nominal flow.
inline ReactiveModel build_reactive_model(const FlowNetwork& net, const IntegerFlow& nominal, DistanceKind kind) {
  using namespace milp;
  require_same_arcs(net, nominal);
  ReactiveModel rm;
  std::int64_t mass = 0;
  for (auto v : nominal.values()) mass += v;
  const bool structure = kind == DistanceKind::Structure;
  rm.vars = solrob::detail::add_flow_copy(rm.model, net, "r", circulation_bound(net) + mass, structure);
  LinearExpr objective;
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    if (structure) {
      if (nominal[a] > 0)
        objective.add_constant(1).add(rm.vars.y[a], -1);
      else
        objective.add(rm.vars.y[a], 1);
      continue;
    }
    const std::string suffix = std::to_string(a);
    const VarId plus = rm.model.add_continuous("dp" + suffix, Rational(0), std::nullopt);
    const VarId minus = rm.model.add_continuous("dm" + suffix, Rational(0), std::nullopt);
    rm.model.add_constraint("dist" + suffix, LinearExpr().add(rm.vars.x[a], 1).add(plus, -1).add(minus, 1),
                            Relation::Equal, nominal[a]);
    objective.add(plus, 1).add(minus, 1);
  }
  rm.model.set_objective(Sense::Minimize, objective);
  return rm;
}

enum class RobustStatus { Optimal, Infeasible, BudgetExceeded };

inline const char* to_string(RobustStatus s) {
  switch (s) {
    case RobustStatus::Optimal: return "Optimal";
    case RobustStatus::Infeasible: return "Infeasible";
    case RobustStatus::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

struct ProactiveSolution {
  RobustStatus status = RobustStatus::Infeasible;
  std::string infeasible_part;  // "nominal", "anchor" or "scenario <id>"
  Rational c_star;
  bool has_solution = false;
  IntegerFlow nominal;
  std::vector<IntegerFlow> scenario_flows;
  std::vector<std::int64_t> distances;
  Rational cost;
  std::optional<Rational> bound;
  milp::SolveStats stats;
};

/// Nominal optimum, proactive model, solve, decode and exact re-check.
inline ProactiveSolution solve_proactive(const FlowNetwork& net, const RobustSpec& spec,
                                         const milp::Backend& backend = milp::reference_backend(),
                                         const milp::SolveBudget& budget = {}) {
  spec.validate(net);
  ProactiveSolution out;
  try {
    out.c_star = nominal_optimum(net);
  } catch (const InfeasibleError&) {
    out.infeasible_part = "nominal";
    return out;
  }
  for (std::size_t i = 0; i < spec.scenarios.size(); ++i)
    if (!find_feasible_flow(spec.scenarios.apply(net, i))) {
      out.infeasible_part = "scenario " + spec.scenarios[i].id;
      return out;
    }
  const ProactiveModel pm = build_proactive_model(net, spec, out.c_star);
  const milp::MilpResult r = backend.solve(pm.model, budget);
  out.stats = r.stats;
  out.bound = r.best_bound;
  if (r.status == milp::Status::Infeasible) {
    out.infeasible_part = "anchor";
    return out;
  }
  if (r.status == milp::Status::Unbounded) throw UnboundedError("proactive model is unbounded");
  out.status = r.status == milp::Status::Optimal ? RobustStatus::Optimal : RobustStatus::BudgetExceeded;
  if (!r.has_solution()) return out;

  out.has_solution = true;
  out.nominal = pm.nominal.decode(r);
  detail::check_support_indicators(pm.nominal, r);
  if (!is_feasible(net, out.nominal)) throw NumericalError("decoded nominal flow is infeasible");
  const Rational f = net.kind() == NetworkKind::MinCostFlow ? flow_cost(net, out.nominal)
                                                            : Rational(flow_value(net, out.nominal));
  const bool anchored = spec.anchor.mode == Anchor::Mode::Exact
                            ? f == out.c_star
                            : (net.kind() == NetworkKind::MinCostFlow
                                   ? f <= out.c_star * (1 + spec.anchor.epsilon)
                                   : f >= ceil(out.c_star * (1 - spec.anchor.epsilon)));
  if (!anchored) throw NumericalError("decoded nominal flow misses the anchor");
  out.cost = 0;
  for (std::size_t i = 0; i < spec.scenarios.size(); ++i) {
    out.scenario_flows.push_back(pm.scenarios[i].decode(r));
    detail::check_support_indicators(pm.scenarios[i], r);
    if (!is_feasible(spec.scenarios.apply(net, i), out.scenario_flows.back()))
      throw NumericalError("decoded flow of scenario " + spec.scenarios[i].id + " is infeasible");
    out.distances.push_back(distance(out.nominal, out.scenario_flows.back(), spec.distance));
    out.cost += spec.scenarios[i].weight * out.distances.back();
  }
  if (out.cost != r.objective) throw NumericalError("proactive objective disagrees with the decoded distances");
  return out;
}

struct ReactiveSolution {
  RobustStatus status = RobustStatus::Infeasible;
  bool has_solution = false;
  IntegerFlow flow;
  std::int64_t cost = 0;
  milp::SolveStats stats;
};

/// Reactive problem through the MILP backend.
inline ReactiveSolution solve_reactive(const FlowNetwork& net, const IntegerFlow& nominal, DistanceKind kind,
                                       const milp::Backend& backend = milp::reference_backend(),
                                       const milp::SolveBudget& budget = {}) {
  const ReactiveModel rm = build_reactive_model(net, nominal, kind);
  const milp::MilpResult r = backend.solve(rm.model, budget);
  ReactiveSolution out;
  out.stats = r.stats;
  if (r.status == milp::Status::Infeasible) return out;
  if (r.status == milp::Status::Unbounded) throw UnboundedError("reactive model is unbounded");
  out.status = r.status == milp::Status::Optimal ? RobustStatus::Optimal : RobustStatus::BudgetExceeded;
  if (!r.has_solution()) return out;
  out.has_solution = true;
  out.flow = rm.vars.decode(r);
  detail::check_support_indicators(rm.vars, r);
  if (!is_feasible(net, out.flow)) throw NumericalError("decoded reactive flow is infeasible");
  out.cost = distance(out.flow, nominal, kind);
  if (Rational(out.cost) != r.objective) throw NumericalError("reactive objective disagrees with the distance");
  return out;
}

}  // namespace solrob

#endif  // SOLROB_ROBUSTMODELS_HPP
