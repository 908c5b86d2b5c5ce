#ifndef SOLROB_MILP_BRANCH_AND_BOUND_HPP
#define SOLROB_MILP_BRANCH_AND_BOUND_HPP

#include <chrono>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "solrob/milp/model.hpp"
#include "solrob/milp/simplex.hpp"

namespace solrob::milp {

struct SolveBudget {
  std::size_t node_limit = 2'000'000;
  double time_limit_seconds = 3600.0;
  std::size_t max_open_nodes = 500'000;  // beyond this, explore depth-first
  bool trace = false;
};

namespace detail {

inline double to_bound(const std::optional<Rational>& r, double fallback) {
  return r ? to_double(*r) : fallback;
}

/// Double-precision LP of the model, always as a minimization.
inline LpProblem lower_to_lp(const MilpModel& model) {
  LpProblem lp;
  const std::size_t n = model.variable_count();
  lp.cost.assign(n, 0.0);
  lp.lower.resize(n);
  lp.upper.resize(n);
  const double sign = model.objective().sense == Sense::Minimize ? 1.0 : -1.0;
  for (const auto& t : model.objective().terms) lp.cost[t.var] = sign * to_double(t.coef);
  for (VarId v = 0; v < n; ++v) {
    lp.lower[v] = to_bound(model.variable(v).lower, -kInf);
    lp.upper[v] = to_bound(model.variable(v).upper, kInf);
    if (model.variable(v).is_integral()) {
      lp.lower[v] = std::ceil(lp.lower[v] - 1e-9);
      lp.upper[v] = std::floor(lp.upper[v] + 1e-9);
    }
  }
  lp.rows.reserve(model.constraints().size());
  for (const auto& c : model.constraints()) {
    LpRow row;
    row.relation = c.relation;
    row.rhs = to_double(c.rhs);
    for (const auto& t : c.terms) row.coefs.emplace_back(t.var, to_double(t.coef));
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

/// Integer variables rounded; continuous ones rationalized.
inline std::vector<Rational> exact_assignment(const MilpModel& model, const std::vector<double>& x) {
  std::vector<Rational> out(x.size());
  for (VarId v = 0; v < x.size(); ++v) {
    if (model.variable(v).is_integral())
      out[v] = Rational(static_cast<long long>(std::llround(x[v])));
    else
      out[v] = rationalize(x[v]);
  }
  return out;
}

inline bool objective_is_integral(const MilpModel& model) {
  if (!is_integer(model.objective().constant)) return false;
  for (const auto& t : model.objective().terms)
    if (!model.variable(t.var).is_integral() || !is_integer(t.coef)) return false;
  return true;
}

}  // namespace detail

/// Relaxation of the model (integrality dropped), solved by the simplex.
inline MilpResult solve_lp(const MilpModel& model, const LpOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  const LpSolution lp = solve_lp(detail::lower_to_lp(model.relaxed()), options);
  MilpResult result;
  result.stats.lp_iterations = lp.iterations;
  switch (lp.status) {
    case LpStatus::Infeasible: result.status = Status::Infeasible; break;
    case LpStatus::Unbounded: result.status = Status::Unbounded; break;
    case LpStatus::Optimal: {
      result.status = Status::Optimal;
      result.assignment.resize(lp.x.size());
      for (std::size_t v = 0; v < lp.x.size(); ++v) result.assignment[v] = rationalize(lp.x[v]);
      result.objective = evaluate_objective(model, result.assignment);
      const double sign = model.objective().sense == Sense::Minimize ? 1.0 : -1.0;
      result.best_bound = rationalize(sign * lp.objective + to_double(model.objective().constant));
      break;
    }
  }
  result.stats.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

/// Best-bound branch and bound. Branches on the most fractional integer
/// variable of the highest priority (lowest index on ties); deterministic for
/// a given model. A start assignment on the model, when feasible, seeds the
/// incumbent.
inline MilpResult solve_milp(const MilpModel& model, const SolveBudget& budget = {},
                             const LpOptions& lp_options = {}) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  const LpProblem root = detail::lower_to_lp(model);
  const std::size_t n = model.variable_count();
  for (VarId v = 0; v < n; ++v)
    if (model.variable(v).is_integral() && (!std::isfinite(root.lower[v]) || !std::isfinite(root.upper[v])))
      throw StructuralError("integer variable '" + model.variable(v).name + "' needs finite bounds");

  const bool integral_objective = detail::objective_is_integral(model);
  const double sign = model.objective().sense == Sense::Minimize ? 1.0 : -1.0;
  const double constant = to_double(model.objective().constant);

  struct Node {
    double bound;  // LP value of the parent (minimization form)
    std::size_t depth;
    std::size_t id;
    std::vector<std::pair<VarId, std::pair<double, double>>> fixes;
  };
  struct Worse {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;
      if (a.depth != b.depth) return a.depth < b.depth;
      return a.id > b.id;
    }
  };
  std::priority_queue<Node, std::vector<Node>, Worse> best_first;
  std::vector<Node> depth_first;
  bool use_depth_first = false;

  MilpResult result;
  std::optional<double> incumbent;  // minimization form, without constant
  std::size_t next_id = 0;
  best_first.push(Node{-kInf, 0, next_id++, {}});
  if (!model.start().empty() && verify_assignment(model, model.start(), Rational(0)).empty()) {
    incumbent = sign * to_double(evaluate_objective(model, model.start())) - sign * constant;
    result.assignment = model.start();
    if (budget.trace) std::clog << "bnb: start accepted with objective " << sign * *incumbent + constant << "\n";
  }

  auto prune_value = [&](double lp_value) {
    if (!incumbent) return false;
    if (integral_objective) {
      const double total = lp_value + sign * constant;
      return std::ceil(total - 1e-6) >= *incumbent + sign * constant - 1e-9;
    }
    return lp_value >= *incumbent - 1e-9 * std::max(1.0, std::fabs(*incumbent));
  };

  bool budget_hit = false;
  bool root_unbounded = false;
  double open_bound = kInf;
  while (!best_first.empty() || !depth_first.empty()) {
    if (result.stats.nodes >= budget.node_limit || elapsed() > budget.time_limit_seconds) {
      budget_hit = true;
      break;
    }
    Node node;
    if (!depth_first.empty()) {
      node = std::move(depth_first.back());
      depth_first.pop_back();
    } else {
      node = best_first.top();
      best_first.pop();
    }
    if (prune_value(node.bound)) continue;
    ++result.stats.nodes;

    LpProblem lp = root;
    for (const auto& [v, b] : node.fixes) {
      lp.lower[v] = b.first;
      lp.upper[v] = b.second;
    }
    LpSolution sol;
    try {
      sol = solve_lp(lp, lp_options);
    } catch (const NumericalError&) {
      // Stalled under Dantzig pricing; retry with Bland's rule throughout.
      LpOptions careful = lp_options;
      careful.degenerate_switch = 0;
      if (budget.trace) std::clog << "bnb: node " << node.id << " LP retried with Bland's rule\n";
      sol = solve_lp(lp, careful);
    }
    result.stats.lp_iterations += sol.iterations;
    if (sol.status == LpStatus::Infeasible) continue;
    if (sol.status == LpStatus::Unbounded) {
      if (node.depth == 0) root_unbounded = true;
      break;
    }
    if (prune_value(sol.objective)) continue;

    VarId branch = n;
    double best_frac = 1e-6;
    int best_priority = std::numeric_limits<int>::min();
    for (VarId v = 0; v < n; ++v) {
      if (!model.variable(v).is_integral()) continue;
      const double f = sol.x[v] - std::floor(sol.x[v]);
      const double dist = std::min(f, 1.0 - f);
      if (dist <= 1e-6) continue;
      const int p = model.priority(v);
      if (p > best_priority || (p == best_priority && dist > best_frac + 1e-12)) {
        best_priority = p;
        best_frac = dist;
        branch = v;
      }
    }
    if (branch == n) {
      auto exact = detail::exact_assignment(model, sol.x);
      if (!verify_assignment(model, exact).empty()) {
        if (budget.trace) std::clog << "bnb: integral LP point failed exact verification\n";
        continue;
      }
      const double value = sign * to_double(evaluate_objective(model, exact)) - sign * constant;
      if (!incumbent || value < *incumbent - 1e-9) {
        incumbent = value;
        result.assignment = std::move(exact);
        if (budget.trace)
          std::clog << "bnb: incumbent " << sign * value + constant << " at node " << result.stats.nodes << "\n";
      }
      continue;
    }
    const double x = sol.x[branch];
    Node down{sol.objective, node.depth + 1, next_id++, node.fixes};
    Node up{sol.objective, node.depth + 1, next_id++, node.fixes};
    double lo = root.lower[branch], hi = root.upper[branch];
    for (const auto& [v, b] : node.fixes)
      if (v == branch) {
        lo = b.first;
        hi = b.second;
      }
    down.fixes.push_back({branch, {lo, std::floor(x)}});
    up.fixes.push_back({branch, {std::ceil(x), hi}});
    if (!use_depth_first && best_first.size() >= budget.max_open_nodes) {
      use_depth_first = true;
      result.stats.depth_first_fallback = true;
    }
    if (use_depth_first) {
      depth_first.push_back(std::move(up));
      depth_first.push_back(std::move(down));
    } else {
      best_first.push(std::move(down));
      best_first.push(std::move(up));
    }
  }
  if (budget_hit) {
    for (const auto& node : depth_first) open_bound = std::min(open_bound, node.bound);
    if (!best_first.empty()) open_bound = std::min(open_bound, best_first.top().bound);
  }

  result.stats.elapsed_seconds = elapsed();
  if (root_unbounded) {
    result.status = Status::Unbounded;
    result.assignment.clear();
    return result;
  }
  if (budget_hit) {
    result.status = Status::BudgetExceeded;
    if (result.has_solution()) result.objective = evaluate_objective(model, result.assignment);
    if (std::isfinite(open_bound)) result.best_bound = rationalize(sign * open_bound + constant);
    return result;
  }
  if (!result.has_solution()) {
    result.status = Status::Infeasible;
    return result;
  }
  result.status = Status::Optimal;
  result.objective = evaluate_objective(model, result.assignment);
  result.best_bound = result.objective;
  return result;
}

}  // namespace solrob::milp

#endif  // SOLROB_MILP_BRANCH_AND_BOUND_HPP
