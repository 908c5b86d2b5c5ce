#ifndef SOLROB_LOP_HPP
#define SOLROB_LOP_HPP

// Line optimization under uncertain origin-destination demand: lines on a
// station network, deployment x and frequency f per line, and the robust
// variants that tie a nominal solution to one solution per scenario.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "solrob/error.hpp"
#include "solrob/milp/backend.hpp"
#include "solrob/milp/model.hpp"
#include "solrob/rational.hpp"
#include "solrob/robustmodels.hpp"

namespace solrob::lop {

using StationId = std::size_t;

struct Edge {
  StationId u = 0;
  StationId v = 0;
  Rational length;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Network {
  std::vector<std::string> stations;
  std::vector<Edge> edges;

  std::optional<StationId> find(const std::string& name) const {
    for (StationId s = 0; s < stations.size(); ++s)
      if (stations[s] == name) return s;
    return std::nullopt;
  }

  void validate() const {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edges[e].u >= stations.size() || edges[e].v >= stations.size())
        throw StructuralError("edge " + std::to_string(e) + " references an unknown station");
      if (edges[e].u == edges[e].v) throw StructuralError("edge " + std::to_string(e) + " is a loop");
      if (edges[e].length <= 0) throw StructuralError("edge " + std::to_string(e) + " needs a positive length");
    }
  }

  friend bool operator==(const Network&, const Network&) = default;
};

/// Dense hourly demand, od[i][j] passengers from station i to station j.
using OdMatrix = std::vector<std::vector<std::int64_t>>;

inline OdMatrix zero_od(std::size_t stations) { return OdMatrix(stations, std::vector<std::int64_t>(stations, 0)); }

inline void validate_od(const OdMatrix& od, std::size_t stations) {
  if (od.size() != stations) throw StructuralError("OD matrix has the wrong number of rows");
  for (std::size_t i = 0; i < stations; ++i) {
    if (od[i].size() != stations) throw StructuralError("OD matrix has the wrong number of columns");
    if (od[i][i] != 0) throw StructuralError("OD matrix needs a zero diagonal");
    for (auto v : od[i])
      if (v < 0) throw StructuralError("OD demand must be nonnegative");
  }
}

struct Line {
  StationId s1 = 0;  // lower station index
  StationId s2 = 0;
  std::vector<StationId> path;   // stations from s1 to s2
  std::vector<std::size_t> edges;
  Rational K;        // deployment cost
  Rational K_prime;  // cost per unit of frequency

  friend bool operator==(const Line&, const Line&) = default;
};

struct Scenario {
  std::string id;
  Rational weight = 1;
  OdMatrix od;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct Instance {
  Network network;
  OdMatrix od0;
  std::vector<Line> lines;
  std::int64_t capacity = 200;  // C, passengers per train
  std::int64_t max_frequency = 6;
  std::vector<Scenario> scenarios;

  std::string line_name(std::size_t l) const {
    return network.stations.at(lines.at(l).s1) + "-" + network.stations.at(lines.at(l).s2);
  }

  /// Demand a line carries in the edge rows: OD(s1, s2) of the given matrix.
  std::int64_t line_demand(const OdMatrix& od, std::size_t l) const { return od[lines[l].s1][lines[l].s2]; }

  void validate() const {
    network.validate();
    if (capacity <= 0) throw StructuralError("carriage capacity must be positive");
    if (max_frequency <= 0) throw StructuralError("maximal frequency must be positive");
    validate_od(od0, network.stations.size());
    for (const auto& sc : scenarios) {
      validate_od(sc.od, network.stations.size());
      if (sc.weight <= 0) throw StructuralError("scenario '" + sc.id + "' needs a positive weight");
      for (std::size_t i = 0; i < sc.od.size(); ++i)
        for (std::size_t j = 0; j < sc.od.size(); ++j)
          if (sc.od[i][j] != 0 && od0[i][j] == 0)
            throw StructuralError("scenario '" + sc.id + "' has demand where the nominal matrix has none");
    }
    for (const auto& line : lines)
      if (line.K < 0 || line.K_prime < 0) throw StructuralError("line costs must be nonnegative");
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

// ---------------------------------------------------------------------------
// Lines

/// Shortest path from s to t; among shortest paths the lexicographically
/// smallest station sequence, then the lowest edge ids.
inline std::pair<std::vector<StationId>, std::vector<std::size_t>> shortest_path(const Network& net, StationId s,
                                                                                 StationId t) {
  const std::size_t n = net.stations.size();
  std::vector<std::vector<std::pair<StationId, std::size_t>>> adj(n);
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    adj[net.edges[e].u].push_back({net.edges[e].v, e});
    adj[net.edges[e].v].push_back({net.edges[e].u, e});
  }
  // Distances to t (Dijkstra with exact lengths; n is small).
  std::vector<std::optional<Rational>> dist(n);
  std::vector<bool> done(n, false);
  dist[t] = Rational(0);
  for (std::size_t round = 0; round < n; ++round) {
    std::optional<StationId> best;
    for (StationId v = 0; v < n; ++v)
      if (!done[v] && dist[v] && (!best || *dist[v] < *dist[*best])) best = v;
    if (!best) break;
    done[*best] = true;
    for (const auto& [w, e] : adj[*best]) {
      const Rational d = *dist[*best] + net.edges[e].length;
      if (!dist[w] || d < *dist[w]) dist[w] = d;
    }
  }
  if (!dist[s])
    throw StructuralError("stations " + net.stations[s] + " and " + net.stations[t] + " are not connected");
  std::vector<StationId> path{s};
  std::vector<std::size_t> edges;
  StationId v = s;
  while (v != t) {
    std::optional<std::pair<StationId, std::size_t>> next;
    for (const auto& [w, e] : adj[v]) {
      if (!dist[w] || *dist[v] != net.edges[e].length + *dist[w]) continue;
      if (!next || w < next->first || (w == next->first && e < next->second)) next = {w, e};
    }
    v = next->first;
    path.push_back(v);
    edges.push_back(next->second);
  }
  return {path, edges};
}

/// One line per unordered station pair with demand in either direction.
inline std::vector<Line> build_lines(const Network& net, const OdMatrix& od0, const Rational& K,
                                     const Rational& K_prime) {
  validate_od(od0, net.stations.size());
  std::vector<Line> lines;
  for (StationId i = 0; i < net.stations.size(); ++i)
    for (StationId j = i + 1; j < net.stations.size(); ++j) {
      if (od0[i][j] == 0 && od0[j][i] == 0) continue;
      auto [path, edges] = shortest_path(net, i, j);
      lines.push_back(Line{i, j, std::move(path), std::move(edges), K, K_prime});
    }
  return lines;
}

// ---------------------------------------------------------------------------
// Solutions and metrics

struct Solution {
  std::vector<std::int64_t> x;  // deployment, 0 or 1
  std::vector<std::int64_t> f;  // frequency in [0, MF]

  friend bool operator==(const Solution&, const Solution&) = default;
};

enum class Basis { Frequencies, Deployment };

inline const char* to_string(Basis b) { return b == Basis::Frequencies ? "frequencies" : "deployment"; }

inline Basis parse_basis(const std::string& s) {
  if (s == "frequencies" || s == "f") return Basis::Frequencies;
  if (s == "deployment" || s == "x") return Basis::Deployment;
  throw ConfigError("unknown basis '" + s + "' (expected frequencies or deployment)");
}

inline const std::vector<std::int64_t>& basis_values(const Solution& s, Basis b) {
  return b == Basis::Frequencies ? s.f : s.x;
}

/// Edge rows and linking rows of F(od); empty when feasible.
inline std::vector<std::string> check_feasible(const Instance& inst, const OdMatrix& od, const Solution& sol) {
  std::vector<std::string> problems;
  const std::size_t L = inst.lines.size();
  if (sol.x.size() != L || sol.f.size() != L) {
    problems.push_back("solution has the wrong number of lines");
    return problems;
  }
  for (std::size_t l = 0; l < L; ++l) {
    if (sol.x[l] != 0 && sol.x[l] != 1) problems.push_back("line " + inst.line_name(l) + ": x is not binary");
    if (sol.f[l] < 0 || sol.f[l] > inst.max_frequency * sol.x[l])
      problems.push_back("line " + inst.line_name(l) + ": f exceeds MF*x");
    if (sol.x[l] > sol.f[l]) problems.push_back("line " + inst.line_name(l) + ": deployed with zero frequency");
  }
  for (std::size_t e = 0; e < inst.network.edges.size(); ++e) {
    std::int64_t carried = 0, demand = 0;
    for (std::size_t l = 0; l < L; ++l)
      if (std::find(inst.lines[l].edges.begin(), inst.lines[l].edges.end(), e) != inst.lines[l].edges.end()) {
        carried += inst.capacity * sol.f[l];
        demand += inst.line_demand(od, l);
      }
    if (carried < demand)
      problems.push_back("edge " + std::to_string(e) + ": capacity " + std::to_string(carried) + " < demand " +
                         std::to_string(demand));
  }
  return problems;
}

inline Rational nominal_objective(const Instance& inst, const Solution& sol) {
  Rational total = 0;
  for (std::size_t l = 0; l < inst.lines.size(); ++l)
    total += inst.lines[l].K * sol.x[l] + inst.lines[l].K_prime * sol.f[l];
  return total;
}

inline std::int64_t distance(const Solution& a, const Solution& b, Basis basis) {
  const auto& u = basis_values(a, basis);
  const auto& v = basis_values(b, basis);
  std::int64_t d = 0;
  for (std::size_t l = 0; l < u.size(); ++l) d += u[l] > v[l] ? u[l] - v[l] : v[l] - u[l];
  return d;
}

struct Metrics {
  Rational nominal_objective;
  std::int64_t distance = 0;    // summed over scenarios and lines
  std::size_t anchored = 0;     // lines whose value is identical in every solution
  std::vector<std::int64_t> per_scenario;
};

inline Metrics report_metrics(const Instance& inst, const Solution& nominal, const std::vector<Solution>& scenarios,
                              Basis basis) {
  Metrics m;
  m.nominal_objective = nominal_objective(inst, nominal);
  for (const auto& s : scenarios) {
    m.per_scenario.push_back(distance(nominal, s, basis));
    m.distance += m.per_scenario.back();
  }
  const auto& base = basis_values(nominal, basis);
  for (std::size_t l = 0; l < inst.lines.size(); ++l) {
    bool same = true;
    for (const auto& s : scenarios) same = same && basis_values(s, basis)[l] == base[l];
    if (same) ++m.anchored;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Scenario generation

/// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
inline double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Each positive entry keeps its nominal value with probability keep_prob,
/// otherwise is drawn uniformly from [low, high] times it and rounded half
/// away from zero. Zero entries stay zero.
inline std::vector<OdMatrix> gen_scenarios(const OdMatrix& od0, std::size_t count, std::uint64_t seed,
                                           double keep_prob = 0.2, double low = 0.9, double high = 1.1) {
  if (keep_prob < 0 || keep_prob > 1 || low > high || low < 0) throw ConfigError("bad scenario generation parameters");
  std::mt19937_64 rng(seed);
  std::vector<OdMatrix> out;
  for (std::size_t s = 0; s < count; ++s) {
    OdMatrix od = od0;
    for (auto& row : od)
      for (auto& v : row) {
        if (v == 0) continue;
        const double keep = unit_draw(rng);
        const double u = unit_draw(rng);
        if (keep < keep_prob) continue;
        const double base = static_cast<double>(v);
        v = static_cast<std::int64_t>(std::round(base * (low + (high - low) * u)));
      }
    out.push_back(std::move(od));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Models

struct Vars {
  std::vector<milp::VarId> x, f;

  Solution decode(const milp::MilpResult& r) const {
    Solution s;
    for (auto v : x) s.x.push_back(r.int_value(v));
    for (auto v : f) s.f.push_back(r.int_value(v));
    return s;
  }

  const std::vector<milp::VarId>& on(Basis b) const { return b == Basis::Frequencies ? f : x; }
};

/// Variables and rows of F(od): binary x, integer f in [0, MF], demand rows
/// per edge used by some line, two linking rows per line.
inline Vars feasibility_rows(milp::MilpModel& model, const Instance& inst, const OdMatrix& od, const std::string& tag) {
  using namespace milp;
  Vars v;
  const std::size_t L = inst.lines.size();
  for (std::size_t l = 0; l < L; ++l) {
    v.x.push_back(model.add_binary("x" + tag + "_" + std::to_string(l)));
    v.f.push_back(model.add_integer("f" + tag + "_" + std::to_string(l), Rational(0), Rational(inst.max_frequency)));
  }
  // C * sum f >= D holds over the integers exactly when sum f >= ceil(D / C),
  // and that form has a tighter relaxation. Likewise at least
  // ceil(ceil(D / C) / MF) lines through the edge must be deployed.
  for (std::size_t e = 0; e < inst.network.edges.size(); ++e) {
    LinearExpr trains, deployed;
    std::int64_t demand = 0;
    bool used = false;
    for (std::size_t l = 0; l < L; ++l)
      if (std::find(inst.lines[l].edges.begin(), inst.lines[l].edges.end(), e) != inst.lines[l].edges.end()) {
        trains.add(v.f[l], 1);
        deployed.add(v.x[l], 1);
        demand += inst.line_demand(od, l);
        used = true;
      }
    if (!used) continue;
    const std::int64_t need = (demand + inst.capacity - 1) / inst.capacity;
    const std::string sfx = tag + "_" + std::to_string(e);
    model.add_constraint("dem" + sfx, trains, Relation::GreaterEqual, need);
    if (need > inst.max_frequency)
      model.add_constraint("cov" + sfx, deployed, Relation::GreaterEqual,
                           (need + inst.max_frequency - 1) / inst.max_frequency);
  }
  for (std::size_t l = 0; l < L; ++l) {
    const std::string s = tag + "_" + std::to_string(l);
    model.add_constraint("lnk" + s, LinearExpr().add(v.f[l], 1).add(v.x[l], -inst.max_frequency),
                         Relation::LessEqual, 0);
    model.add_constraint("dep" + s, LinearExpr().add(v.x[l], 1).add(v.f[l], -1), Relation::LessEqual, 0);
  }
  return v;
}

inline milp::LinearExpr nominal_objective_row(const Instance& inst, const Vars& v) {
  milp::LinearExpr e;
  for (std::size_t l = 0; l < inst.lines.size(); ++l) e.add(v.x[l], inst.lines[l].K).add(v.f[l], inst.lines[l].K_prime);
  return e;
}

enum class Approach { Proactive, Anchored, KDistance };

inline const char* to_string(Approach a) {
  switch (a) {
    case Approach::Proactive: return "proactive";
    case Approach::Anchored: return "anchored";
    case Approach::KDistance: return "kdist";
  }
  return "?";
}

struct ApproachSpec {
  Approach approach = Approach::Proactive;
  Basis basis = Basis::Frequencies;
  Rational epsilon = 0;  // proactive only
  std::int64_t k = 0;    // k-distance only

  void validate() const {
    if (epsilon < 0) throw ConfigError("epsilon must be nonnegative");
    if (epsilon != 0 && approach != Approach::Proactive) throw ConfigError("epsilon applies to the proactive approach");
    if (k < 0) throw ConfigError("k must be nonnegative");
    if (k != 0 && approach != Approach::KDistance) throw ConfigError("k applies to the k-distance approach");
  }

  std::string label() const {
    if (approach == Approach::KDistance) return std::to_string(k) + "-distance";
    return approach == Approach::Proactive ? "Proactive" : "Anchored";
  }
};

struct Model {
  milp::MilpModel model;
  Vars nominal;
  std::vector<Vars> scenarios;
  std::vector<milp::VarId> anchor;  // a_l, anchored approach
  std::vector<std::vector<milp::VarId>> delta;  // per scenario: d_l (proactive) or delta_l (k-distance)
  Basis basis = Basis::Frequencies;

  /// Full assignment for given per-copy solutions, auxiliaries set to their
  /// tightest values.
  std::vector<Rational> assignment(const Solution& nominal_sol, const std::vector<Solution>& scenario_sols) const {
    std::vector<Rational> x(model.variable_count(), Rational(0));
    auto put = [&](const Vars& v, const Solution& s) {
      for (std::size_t l = 0; l < v.x.size(); ++l) {
        x[v.x[l]] = s.x[l];
        x[v.f[l]] = s.f[l];
      }
    };
    put(nominal, nominal_sol);
    const auto& base = basis_values(nominal_sol, basis);
    for (std::size_t l = 0; l < anchor.size(); ++l) x[anchor[l]] = 1;
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      put(scenarios[s], scenario_sols[s]);
      const auto& cur = basis_values(scenario_sols[s], basis);
      for (std::size_t l = 0; l < base.size(); ++l) {
        const std::int64_t gap = cur[l] > base[l] ? cur[l] - base[l] : base[l] - cur[l];
        if (gap != 0 && l < anchor.size()) x[anchor[l]] = 0;
        if (s < delta.size()) x[delta[s][l]] = is_distance ? gap : std::int64_t{gap != 0};
      }
    }
    return x;
  }

  bool is_distance = false;  // delta holds d_l rather than indicators
};

inline Model build_lop_model(const Instance& inst, const ApproachSpec& spec, std::optional<Rational> c_star) {
  using namespace milp;
  spec.validate();
  if (spec.approach != Approach::KDistance && !c_star) throw ConfigError("this approach needs the nominal optimum c*");
  Model m;
  m.basis = spec.basis;
  m.is_distance = spec.approach == Approach::Proactive;
  const std::size_t L = inst.lines.size();
  const bool freq = spec.basis == Basis::Frequencies;
  const std::int64_t gap = freq ? inst.max_frequency : 1;
  m.nominal = feasibility_rows(m.model, inst, inst.od0, "0");
  // Branch on the nominal plan, then indicators; scenario copies follow.
  for (std::size_t l = 0; l < L; ++l) {
    m.model.set_priority(m.nominal.x[l], 3);
    m.model.set_priority(m.nominal.f[l], 3);
  }
  const LinearExpr no = nominal_objective_row(inst, m.nominal);
  if (spec.approach != Approach::KDistance) {
    if (spec.epsilon == 0)
      m.model.add_constraint("anchor", no, Relation::Equal, *c_star);
    else
      m.model.add_constraint("anchor", no, Relation::LessEqual, *c_star * (1 + spec.epsilon));
  }
  if (spec.approach == Approach::Anchored)
    for (std::size_t l = 0; l < L; ++l) {
      m.anchor.push_back(m.model.add_binary("a_" + std::to_string(l)));
      m.model.set_priority(m.anchor.back(), 2);
    }

  LinearExpr objective;
  for (std::size_t s = 0; s < inst.scenarios.size(); ++s) {
    const std::string tag = "s" + std::to_string(s + 1);
    m.scenarios.push_back(feasibility_rows(m.model, inst, inst.scenarios[s].od, tag));
    const auto& nom = m.nominal.on(spec.basis);
    const auto& cur = m.scenarios.back().on(spec.basis);
    if (spec.approach != Approach::Anchored) m.delta.emplace_back();
    LinearExpr count;
    for (std::size_t l = 0; l < L; ++l) {
      const std::string sfx = tag + "_" + std::to_string(l);
      const LinearExpr up = LinearExpr().add(cur[l], 1).add(nom[l], -1);
      const LinearExpr down = LinearExpr().add(nom[l], 1).add(cur[l], -1);
      switch (spec.approach) {
        case Approach::Proactive: {
          // Integral at every optimum; declaring it so lets the search round bounds.
          const VarId d = m.model.add_integer("d" + sfx, Rational(0), Rational(gap));
          m.delta.back().push_back(d);
          m.model.add_constraint("du" + sfx, LinearExpr(up).add(d, -1), Relation::LessEqual, 0);
          m.model.add_constraint("dd" + sfx, LinearExpr(down).add(d, -1), Relation::LessEqual, 0);
          objective.add(d, inst.scenarios[s].weight);
          break;
        }
        case Approach::Anchored:
          // gap * (1 - a) on the right, moved to the left side.
          m.model.add_constraint("au" + sfx, LinearExpr(up).add(m.anchor[l], gap), Relation::LessEqual, gap);
          m.model.add_constraint("ad" + sfx, LinearExpr(down).add(m.anchor[l], gap), Relation::LessEqual, gap);
          break;
        case Approach::KDistance: {
          const VarId d = m.model.add_binary("delta" + sfx);
          m.delta.back().push_back(d);
          m.model.set_priority(d, 2);
          m.model.add_constraint("ku" + sfx, LinearExpr(up).add(d, -gap), Relation::LessEqual, 0);
          m.model.add_constraint("kd" + sfx, LinearExpr(down).add(d, -gap), Relation::LessEqual, 0);
          count.add(d, 1);
          break;
        }
      }
    }
    if (spec.approach == Approach::KDistance)
      m.model.add_constraint("k" + tag, count, Relation::LessEqual, spec.k);
  }
  switch (spec.approach) {
    case Approach::Proactive: m.model.set_objective(Sense::Minimize, objective); break;
    case Approach::Anchored: {
      LinearExpr total;
      for (auto a : m.anchor) total.add(a, 1);
      m.model.set_objective(Sense::Maximize, total);
      break;
    }
    case Approach::KDistance: m.model.set_objective(Sense::Minimize, no); break;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Solving

struct Run {
  RobustStatus status = RobustStatus::Infeasible;
  bool has_solution = false;
  Solution nominal;
  std::vector<Solution> scenarios;
  Rational objective;
  Metrics metrics;
  milp::SolveStats stats;
};

namespace detail {

inline void require_feasible(const Instance& inst, const OdMatrix& od, const Solution& s, const std::string& what) {
  const auto problems = check_feasible(inst, od, s);
  if (!problems.empty()) throw NumericalError(what + " is infeasible: " + problems.front());
}

inline RobustStatus status_of(milp::Status s) {
  switch (s) {
    case milp::Status::Optimal: return RobustStatus::Optimal;
    case milp::Status::BudgetExceeded: return RobustStatus::BudgetExceeded;
    case milp::Status::Infeasible: return RobustStatus::Infeasible;
    case milp::Status::Unbounded: throw UnboundedError("line planning model is unbounded");
  }
  return RobustStatus::Infeasible;
}

}  // namespace detail

/// Nominal problem: c* and an optimal solution.
inline std::pair<Rational, Solution> solve_nominal(const Instance& inst,
                                                   const milp::Backend& backend = milp::reference_backend(),
                                                   const milp::SolveBudget& budget = {}) {
  milp::MilpModel model;
  const Vars v = feasibility_rows(model, inst, inst.od0, "0");
  model.set_objective(milp::Sense::Minimize, nominal_objective_row(inst, v));
  const auto r = backend.solve(model, budget);
  if (r.status == milp::Status::Infeasible) throw InfeasibleError("the nominal line planning instance is infeasible");
  if (r.status != milp::Status::Optimal) throw BudgetError("nominal line planning solve ran out of budget");
  Solution s = v.decode(r);
  detail::require_feasible(inst, inst.od0, s, "nominal solution");
  return {nominal_objective(inst, s), s};
}

struct Reactive {
  RobustStatus status = RobustStatus::Infeasible;
  bool has_solution = false;
  Solution solution;
  std::int64_t cost = 0;
  milp::SolveStats stats;
};

/// Closest solution of F(od) to a fixed nominal. In the frequency basis the
/// per-line deviation d_l is an integer in [0, MF]; in the deployment basis it
/// is binary.
inline Reactive solve_reactive(const Instance& inst, const OdMatrix& od, const Solution& nominal, Basis basis,
                               const milp::Backend& backend = milp::reference_backend(),
                               const milp::SolveBudget& budget = {}) {
  using namespace milp;
  MilpModel model;
  const Vars v = feasibility_rows(model, inst, od, "r");
  const auto& cur = v.on(basis);
  const auto& base = basis_values(nominal, basis);
  const std::int64_t hi = basis == Basis::Frequencies ? inst.max_frequency : 1;
  LinearExpr objective;
  for (std::size_t l = 0; l < inst.lines.size(); ++l) {
    const std::string sfx = std::to_string(l);
    const VarId d = model.add_integer("d_" + sfx, Rational(0), Rational(hi));
    model.add_constraint("du_" + sfx, LinearExpr().add(cur[l], 1).add(d, -1), Relation::LessEqual, base[l]);
    model.add_constraint("dd_" + sfx, LinearExpr().add(cur[l], -1).add(d, -1), Relation::LessEqual, -base[l]);
    objective.add(d, 1);
  }
  model.set_objective(Sense::Minimize, objective);
  const auto r = backend.solve(model, budget);
  Reactive out;
  out.stats = r.stats;
  out.status = detail::status_of(r.status);
  if (!r.has_solution()) return out;
  out.has_solution = true;
  out.solution = v.decode(r);
  detail::require_feasible(inst, od, out.solution, "reactive solution");
  out.cost = distance(out.solution, nominal, basis);
  if (out.status == RobustStatus::Optimal && Rational(out.cost) != r.objective)
    throw NumericalError("reactive objective disagrees with the distance");
  return out;
}

/// A cheap feasible point of the robust model: the nominal optimum repaired
/// per scenario, or for k-distance one plan serving every scenario.
inline std::optional<std::pair<Solution, std::vector<Solution>>> feasible_start(const Instance& inst,
                                                                               const ApproachSpec& spec,
                                                                               const milp::Backend& backend) {
  try {
    if (spec.approach == Approach::KDistance) {
      Instance peak = inst;
      for (const auto& sc : inst.scenarios)
        for (std::size_t i = 0; i < sc.od.size(); ++i)
          for (std::size_t j = 0; j < sc.od.size(); ++j) peak.od0[i][j] = std::max(peak.od0[i][j], sc.od[i][j]);
      const Solution plan = solve_nominal(peak, backend).second;
      return std::pair{plan, std::vector<Solution>(inst.scenarios.size(), plan)};
    }
    const Solution nominal = solve_nominal(inst, backend).second;
    std::vector<Solution> repaired;
    for (const auto& sc : inst.scenarios) {
      const auto r = solve_reactive(inst, sc.od, nominal, spec.basis, backend);
      if (!r.has_solution) return std::nullopt;
      repaired.push_back(r.solution);
    }
    return std::pair{nominal, repaired};
  } catch (const Error&) {
    return std::nullopt;
  }
}

inline Run solve_lop(const Instance& inst, const ApproachSpec& spec, std::optional<Rational> c_star,
                     const milp::Backend& backend = milp::reference_backend(), const milp::SolveBudget& budget = {}) {
  Model m = build_lop_model(inst, spec, c_star);
  if (const auto start = feasible_start(inst, spec, backend))
    m.model.set_start(m.assignment(start->first, start->second));
  const auto r = backend.solve(m.model, budget);
  Run run;
  run.stats = r.stats;
  run.status = detail::status_of(r.status);
  if (!r.has_solution()) return run;
  run.has_solution = true;
  run.objective = r.objective;
  run.nominal = m.nominal.decode(r);
  detail::require_feasible(inst, inst.od0, run.nominal, "nominal solution");
  for (std::size_t s = 0; s < m.scenarios.size(); ++s) {
    run.scenarios.push_back(m.scenarios[s].decode(r));
    detail::require_feasible(inst, inst.scenarios[s].od, run.scenarios.back(), "solution of scenario " + inst.scenarios[s].id);
  }
  run.metrics = report_metrics(inst, run.nominal, run.scenarios, spec.basis);
  const Rational no = run.metrics.nominal_objective;
  if (c_star && spec.approach != Approach::KDistance && no > *c_star * (1 + spec.epsilon))
    throw NumericalError("nominal objective misses the anchor");
  switch (spec.approach) {
    case Approach::Proactive: {
      Rational weighted = 0;
      for (std::size_t s = 0; s < inst.scenarios.size(); ++s)
        weighted += inst.scenarios[s].weight * run.metrics.per_scenario[s];
      if (run.status == RobustStatus::Optimal && weighted != run.objective)
        throw NumericalError("proactive objective disagrees with the decoded distances");
      run.objective = weighted;
      break;
    }
    case Approach::Anchored: {
      std::int64_t claimed = 0;
      for (std::size_t l = 0; l < m.anchor.size(); ++l) {
        const bool a = r.int_value(m.anchor[l]) == 1;
        claimed += a;
        if (a) {
          const auto base = basis_values(run.nominal, spec.basis)[l];
          for (const auto& sc : run.scenarios)
            if (basis_values(sc, spec.basis)[l] != base)
              throw NumericalError("line " + inst.line_name(l) + " marked anchored but differs");
        }
      }
      if (run.status == RobustStatus::Optimal && static_cast<std::size_t>(claimed) != run.metrics.anchored)
        throw NumericalError("anchored count disagrees with the indicators");
      break;
    }
    case Approach::KDistance:
      for (std::size_t s = 0; s < run.scenarios.size(); ++s) {
        std::int64_t differing = 0;
        for (std::size_t l = 0; l < inst.lines.size(); ++l)
          differing += basis_values(run.scenarios[s], spec.basis)[l] != basis_values(run.nominal, spec.basis)[l];
        if (differing > spec.k) throw NumericalError("k-distance solution differs on more than k lines");
      }
      if (no != run.objective) throw NumericalError("k-distance objective disagrees with the nominal objective");
      break;
  }
  return run;
}

namespace detail {

/// Weight W such that minimizing W * NO + g, with g an integer in [0, span],
/// settles NO first: distinct plan costs differ by at least 1/lcm of the
/// cost denominators, and W times that gap exceeds span.
inline Rational cost_first_weight(const Instance& inst, std::int64_t span) {
  BigInt lcm = 1;
  for (const auto& line : inst.lines)
    for (const Rational* c : {&line.K, &line.K_prime}) lcm = boost::multiprecision::lcm(lcm, denominator(*c));
  return Rational(lcm) * (span + 1);
}

/// Nominal feasibility rows with NO <= c*; callers put NO into the objective
/// with a cost-first weight, which steers the search like the plain nominal
/// problem. NO = c* is checked on the result.
inline Vars optimal_plan_rows(milp::MilpModel& model, const Instance& inst, const Rational& c_star) {
  const Vars v = feasibility_rows(model, inst, inst.od0, "0");
  model.add_constraint("anchor", nominal_objective_row(inst, v), milp::Relation::LessEqual, c_star);
  for (std::size_t l = 0; l < inst.lines.size(); ++l) {
    model.set_priority(v.x[l], 1);
    model.set_priority(v.f[l], 1);
  }
  return v;
}

inline Solution optimal_plan(const Instance& inst, const Vars& v, const milp::MilpResult& r, const Rational& c_star,
                             const char* what) {
  if (r.status == milp::Status::Infeasible) throw InfeasibleError(std::string(what) + ": no plan costs c*");
  if (r.status != milp::Status::Optimal) throw BudgetError(std::string(what) + " did not finish");
  Solution s = v.decode(r);
  require_feasible(inst, inst.od0, s, what);
  if (nominal_objective(inst, s) != c_star) throw InfeasibleError(std::string(what) + ": c* is not the nominal optimum");
  return s;
}

}  // namespace detail

/// Lexicographically smallest nominal optimum in the order
/// (x_1, f_1, x_2, f_2, ...): each coordinate is minimized and then fixed.
inline Solution lexicographic_nominal(const Instance& inst, const Rational& c_star,
                                     const milp::Backend& backend = milp::reference_backend(),
                                     const milp::SolveBudget& budget = {}) {
  using namespace milp;
  MilpModel model;
  const Vars v = detail::optimal_plan_rows(model, inst, c_star);
  const LinearExpr cost = nominal_objective_row(inst, v);
  const Rational weight = detail::cost_first_weight(inst, inst.max_frequency);
  Solution s;
  for (std::size_t l = 0; l < inst.lines.size(); ++l)
    for (VarId var : {v.x[l], v.f[l]}) {
      model.set_objective(Sense::Minimize, LinearExpr().add(cost, weight).add(var, 1));
      const auto r = backend.solve(model, budget);
      s = detail::optimal_plan(inst, v, r, c_star, "lexicographic nominal search");
      model.set_bounds(var, r.value(var), r.value(var));
    }
  if (inst.lines.empty()) {
    model.set_objective(Sense::Minimize, cost);
    s = detail::optimal_plan(inst, v, backend.solve(model, budget), c_star, "lexicographic nominal search");
  }
  return s;
}

struct DiverseNominal {
  Solution solution;
  std::int64_t min_distance = 0;  // to the earlier solutions; 0 for the seed
};

/// Nominal optima that are pairwise far apart: the lexicographic optimum,
/// then repeatedly the optimum farthest from its nearest earlier pick.
/// |value - reference| is modeled exactly: linear in the deployment basis and
/// when the reference sits at a bound, otherwise with one binary per line and
/// earlier solution.
inline std::vector<DiverseNominal> generate_diverse_nominals(const Instance& inst, const Rational& c_star,
                                                             std::size_t count, Basis basis,
                                                             const milp::Backend& backend = milp::reference_backend(),
                                                             const milp::SolveBudget& budget = {}) {
  using namespace milp;
  if (count == 0) throw ConfigError("count must be at least 1");
  std::vector<DiverseNominal> out{{lexicographic_nominal(inst, c_star, backend, budget), 0}};
  const std::size_t L = inst.lines.size();
  const std::int64_t span = basis == Basis::Frequencies ? inst.max_frequency : 1;
  const std::int64_t z_max = span * static_cast<std::int64_t>(L);
  while (out.size() < count) {
    MilpModel model;
    const Vars v = detail::optimal_plan_rows(model, inst, c_star);
    const VarId z = model.add_integer("z", Rational(0), Rational(z_max));
    const auto& cur = v.on(basis);
    for (std::size_t q = 0; q < out.size(); ++q) {
      const auto& ref = basis_values(out[q].solution, basis);
      LinearExpr total;
      for (std::size_t l = 0; l < L; ++l) {
        if (ref[l] == 0) {
          total.add(cur[l], 1);
          continue;
        }
        if (ref[l] == span) {
          total.add_constant(span).add(cur[l], -1);
          continue;
        }
        // d <= (f - ref) + 2 ref (1 - b) and d <= (ref - f) + 2 (MF - ref) b give d <= |f - ref|.
        const std::int64_t r = ref[l], up = span - r;
        const std::string sfx = std::to_string(q) + "_" + std::to_string(l);
        const VarId d = model.add_integer("d" + sfx, Rational(0), Rational(std::max(r, up)));
        const VarId b = model.add_binary("b" + sfx);
        model.add_constraint("ua" + sfx, LinearExpr().add(d, 1).add(cur[l], -1).add(b, 2 * r), Relation::LessEqual, r);
        model.add_constraint("ub" + sfx, LinearExpr().add(d, 1).add(cur[l], 1).add(b, -2 * up), Relation::LessEqual, r);
        total.add(d, 1);
      }
      model.add_constraint("near" + std::to_string(q), LinearExpr().add(z, 1).add(total, -1), Relation::LessEqual, 0);
    }
    const Rational weight = detail::cost_first_weight(inst, z_max);
    model.set_objective(Sense::Minimize,
                        LinearExpr().add(nominal_objective_row(inst, v), weight).add(z, -1));
    const auto r = backend.solve(model, budget);
    Solution s = detail::optimal_plan(inst, v, r, c_star, "diverse nominal search");
    std::int64_t nearest = std::numeric_limits<std::int64_t>::max();
    for (const auto& q : out) nearest = std::min(nearest, distance(s, q.solution, basis));
    if (nearest != r.int_value(z)) throw NumericalError("diverse nominal distance disagrees with z");
    out.push_back({std::move(s), nearest});
  }
  return out;
}

}  // namespace solrob::lop

#endif  // SOLROB_LOP_HPP
