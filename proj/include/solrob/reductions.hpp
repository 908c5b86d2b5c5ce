#ifndef SOLROB_REDUCTIONS_HPP
#define SOLROB_REDUCTIONS_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <functional>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "solrob/error.hpp"
#include "solrob/netcore.hpp"
#include "solrob/robustmodels.hpp"
#include "solrob/text.hpp"

namespace solrob {

struct Literal {
  std::size_t var = 1;  // 1-based
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::array<Literal, 3>;

struct Sat3Instance {
  std::size_t n = 0;
  std::vector<Clause> clauses;

  std::size_t m() const { return clauses.size(); }

  void validate() const {
    if (n == 0) throw StructuralError("3-SAT instance needs at least one variable");
    if (clauses.empty()) throw StructuralError("3-SAT instance needs at least one clause");
    for (const auto& c : clauses)
      for (const auto& l : c)
        if (l.var < 1 || l.var > n) throw StructuralError("literal refers to variable " + std::to_string(l.var));
  }

  /// assignment[i] is the value of variable i+1.
  bool satisfied_by(const std::vector<bool>& assignment) const {
    if (assignment.size() != n) throw StructuralError("assignment has the wrong number of variables");
    for (const auto& c : clauses) {
      bool sat = false;
      for (const auto& l : c) sat |= assignment[l.var - 1] == l.positive;
      if (!sat) return false;
    }
    return true;
  }

  friend bool operator==(const Sat3Instance&, const Sat3Instance&) = default;
};

struct ThreePartitionInstance {
  std::size_t m = 0;
  std::int64_t B = 0;
  std::vector<std::int64_t> sizes;  // 3m elements

  void validate() const {
    if (m == 0 || B <= 0) throw StructuralError("3-partition needs m >= 1 and B > 0");
    if (sizes.size() != 3 * m)
      throw StructuralError("3-partition needs " + std::to_string(3 * m) + " sizes, got " + std::to_string(sizes.size()));
    std::int64_t total = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      // B/4 < s < B/2 without fractions
      if (!(4 * sizes[i] > B && 2 * sizes[i] < B))
        throw StructuralError("size of element " + std::to_string(i + 1) + " is outside ]B/4, B/2[");
      total += sizes[i];
    }
    if (total != static_cast<std::int64_t>(m) * B) throw StructuralError("sizes do not sum to m*B");
  }

  friend bool operator==(const ThreePartitionInstance&, const ThreePartitionInstance&) = default;
};

/// Subsets of 1-based element indices.
using Partition = std::vector<std::vector<std::size_t>>;

enum class ReductionKind { SatMcfValue, PartitionMcfStructure, SatMfValue, SatMfStructure };

inline const char* to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::SatMcfValue: return "sat-mcf-dval";
    case ReductionKind::PartitionMcfStructure: return "part-mcf-dstruct";
    case ReductionKind::SatMfValue: return "sat-mf-dval";
    case ReductionKind::SatMfStructure: return "sat-mf-dstruct";
  }
  return "?";
}

inline ReductionKind parse_reduction_kind(const std::string& s) {
  for (auto k : {ReductionKind::SatMcfValue, ReductionKind::PartitionMcfStructure, ReductionKind::SatMfValue,
                 ReductionKind::SatMfStructure})
    if (s == to_string(k)) return k;
  throw ConfigError("unknown reduction '" + s + "'");
}

/// Generated instance with the proof's constants. Arc roles live in Arc::tag.
struct ReductionArtifact {
  ReductionKind kind = ReductionKind::SatMcfValue;
  FlowNetwork network;
  FlowScenarioSet scenarios;
  DistanceKind distance = DistanceKind::Value;
  Rational c_star = 0;
  std::int64_t yes_threshold = 0;
  std::int64_t bracket_high = 0;  // largest optimum the proof allows
  std::string source;             // description of the source instance

  RobustSpec spec() const { return {distance, scenarios, Anchor::exact()}; }

  std::vector<ArcId> arcs_tagged(const std::string& tag) const {
    std::vector<ArcId> out;
    for (ArcId a = 0; a < network.arc_count(); ++a)
      if (network.arc(a).tag == tag) out.push_back(a);
    return out;
  }
};

namespace detail {

inline std::string literal_node(const Literal& l) { return (l.positive ? "l" : "nl") + std::to_string(l.var); }

inline std::string describe(const Sat3Instance& sat) {
  std::ostringstream os;
  os << "3-SAT n=" << sat.n << " m=" << sat.m();
  return os.str();
}

/// Nodes s, t, literal pairs, variables and clauses shared by the sat-mcf-dval and sat-mf-dval reductions.
struct SatGraph {
  NetworkBuilder builder;
  NodeId s, t;
  std::vector<NodeId> pos, neg, var, clause;
  std::vector<ArcId> sl_pos, sl_neg, lx_pos, lx_neg, xt, ct, sc;
  std::vector<std::array<ArcId, 3>> lc;
  std::optional<ArcId> st;
};

inline SatGraph sat_graph(const Sat3Instance& sat, NetworkKind kind, bool with_st, bool with_sc,
                          const std::function<Capacity(const std::string&)>& cap) {
  SatGraph g{NetworkBuilder(kind), 0, 0, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
  g.s = g.builder.add_node("s");
  g.t = g.builder.add_node("t");
  for (std::size_t i = 1; i <= sat.n; ++i) {
    g.pos.push_back(g.builder.add_node("l" + std::to_string(i)));
    g.neg.push_back(g.builder.add_node("nl" + std::to_string(i)));
    g.var.push_back(g.builder.add_node("x" + std::to_string(i)));
  }
  for (std::size_t p = 1; p <= sat.m(); ++p) g.clause.push_back(g.builder.add_node("C" + std::to_string(p)));
  auto arc = [&](NodeId u, NodeId v, const std::string& tag) { return g.builder.add_arc(u, v, 0, cap(tag), 0, tag); };
  for (std::size_t i = 0; i < sat.n; ++i) {
    g.sl_pos.push_back(arc(g.s, g.pos[i], "A_sl"));
    g.sl_neg.push_back(arc(g.s, g.neg[i], "A_sl"));
  }
  for (std::size_t i = 0; i < sat.n; ++i) {
    g.lx_pos.push_back(arc(g.pos[i], g.var[i], "A_lx"));
    g.lx_neg.push_back(arc(g.neg[i], g.var[i], "A_lx"));
  }
  for (std::size_t p = 0; p < sat.m(); ++p) {
    std::array<ArcId, 3> ids{};
    for (std::size_t k = 0; k < 3; ++k) {
      const Literal& l = sat.clauses[p][k];
      ids[k] = arc(l.positive ? g.pos[l.var - 1] : g.neg[l.var - 1], g.clause[p], "A_lC");
    }
    g.lc.push_back(ids);
  }
  for (std::size_t i = 0; i < sat.n; ++i) g.xt.push_back(arc(g.var[i], g.t, "A_xt"));
  for (std::size_t p = 0; p < sat.m(); ++p) g.ct.push_back(arc(g.clause[p], g.t, "A_Ct"));
  if (with_st) g.st = arc(g.s, g.t, "A_st");
  if (with_sc)
    for (std::size_t p = 0; p < sat.m(); ++p) g.sc.push_back(arc(g.s, g.clause[p], "A_sC"));
  return g;
}

}  // namespace detail

/// 3-SAT to proactive min-cost flow under value distance (m scenarios).
inline ReductionArtifact reduce_sat_to_mcf_dval(const Sat3Instance& sat) {
  sat.validate();
  const auto n = static_cast<std::int64_t>(sat.n);
  const auto m = static_cast<std::int64_t>(sat.m());
  // The (s,t) arc must carry n-1 units in every scenario.
  auto cap = [&](const std::string& tag) { return Capacity(tag == "A_st" ? std::max(m, n - 1) : m); };
  auto g = detail::sat_graph(sat, NetworkKind::MinCostFlow, true, false, cap);
  g.builder.set_balance(g.s, n);
  g.builder.set_balance(g.t, -n);
  ReductionArtifact art;
  art.kind = ReductionKind::SatMcfValue;
  FlowNetwork net = g.builder.build();
  for (ArcId a : g.xt) net = net.with_arc_bounds(a, 1, net.arc(a).upper);
  art.network = net;
  art.scenarios = FlowScenarioSet(UncertaintyKind::Demand);
  for (std::size_t p = 0; p < sat.m(); ++p) {
    Scenario sc{"xi" + std::to_string(p + 1), 1, {}};
    for (ArcId a : g.xt) sc.overrides[a] = Capacity(0);
    sc.overrides[*g.st] = Capacity(n - 1);
    sc.overrides[g.ct[p]] = Capacity(1);
    art.scenarios.add(sc);
  }
  art.distance = DistanceKind::Value;
  art.c_star = 0;
  art.yes_threshold = 4 * m * n;
  art.bracket_high = 4 * m * n + 2 * m;
  art.source = detail::describe(sat);
  return art;
}

/// 3-Partition to proactive min-cost flow under structure distance (one scenario).
inline ReductionArtifact reduce_partition_to_mcf_dstruct(const ThreePartitionInstance& part) {
  part.validate();
  NetworkBuilder b(NetworkKind::MinCostFlow);
  const NodeId alpha = b.add_node("alpha");
  std::vector<NodeId> v, e;
  for (std::size_t i = 1; i <= 3 * part.m; ++i) v.push_back(b.add_node("V" + std::to_string(i)));
  for (std::size_t j = 1; j <= part.m; ++j) e.push_back(b.add_node("E" + std::to_string(j)));
  const Capacity cap(part.B);
  std::vector<ArcId> av;
  for (std::size_t i = 0; i < v.size(); ++i) av.push_back(b.add_arc(alpha, v[i], 0, cap, 1, "A_aV"));
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < e.size(); ++j) b.add_arc(v[i], e[j], 0, cap, 1, "A_VE");
  for (std::size_t j = 0; j < e.size(); ++j) b.add_arc(e[j], alpha, 0, cap, 1, "A_Ea");
  ReductionArtifact art;
  art.kind = ReductionKind::PartitionMcfStructure;
  art.network = b.build();
  art.scenarios = FlowScenarioSet(UncertaintyKind::Demand);
  Scenario sc{"xi", 1, {}};
  for (std::size_t i = 0; i < av.size(); ++i) sc.overrides[av[i]] = Capacity(part.sizes[i]);
  art.scenarios.add(sc);
  art.distance = DistanceKind::Structure;
  art.c_star = 0;
  art.yes_threshold = 7 * static_cast<std::int64_t>(part.m);
  // Each element may use up to m arcs towards the subsets.
  art.bracket_high = static_cast<std::int64_t>(part.m + 3 * part.m + 3 * part.m * part.m);
  std::ostringstream os;
  os << "3-partition m=" << part.m << " B=" << part.B;
  art.source = os.str();
  return art;
}

/// 3-SAT to proactive max-flow under value distance (m scenarios).
inline ReductionArtifact reduce_sat_to_mf_dval(const Sat3Instance& sat) {
  sat.validate();
  const auto n = static_cast<std::int64_t>(sat.n);
  const auto m = static_cast<std::int64_t>(sat.m());
  auto cap = [&](const std::string& tag) {
    if (tag == "A_xt" || tag == "A_Ct") return Capacity(1);
    if (tag == "A_lC") return Capacity(0);
    return Capacity::infinite();
  };
  auto g = detail::sat_graph(sat, NetworkKind::MaxFlow, false, true, cap);
  g.builder.set_terminals(g.s, g.t);
  ReductionArtifact art;
  art.kind = ReductionKind::SatMfValue;
  art.network = g.builder.build();
  art.scenarios = FlowScenarioSet(UncertaintyKind::Capacity);
  for (std::size_t p = 0; p < sat.m(); ++p) {
    Scenario sc{"xi" + std::to_string(p + 1), 1, {}};
    std::vector<Capacity> u(art.network.arc_count(), Capacity::infinite());
    for (ArcId a : g.xt) u[a] = Capacity(0);
    for (ArcId a : g.sc) u[a] = Capacity(0);
    for (std::size_t q = 0; q < sat.m(); ++q) u[g.ct[q]] = Capacity(q == p ? 1 : 0);
    for (ArcId a = 0; a < u.size(); ++a)
      if (!(u[a] == art.network.arc(a).upper)) sc.overrides[a] = u[a];
    art.scenarios.add(sc);
  }
  art.distance = DistanceKind::Value;
  art.c_star = n + m;
  art.yes_threshold = m * (3 * n + 2 * m - 1);
  art.bracket_high = m * (3 * n + 2 * m + 1);
  art.source = detail::describe(sat);
  return art;
}

/// 3-SAT to proactive max-flow under structure distance (one scenario).
inline ReductionArtifact reduce_sat_to_mf_dstruct(const Sat3Instance& sat) {
  sat.validate();
  const auto n = static_cast<std::int64_t>(sat.n);
  const auto m = static_cast<std::int64_t>(sat.m());
  NetworkBuilder b(NetworkKind::MaxFlow);
  const NodeId s = b.add_node("s");
  const NodeId t = b.add_node("t");
  std::vector<NodeId> pos, neg, x1, x2, x3, c1, c2;
  for (std::size_t i = 1; i <= sat.n; ++i) {
    const auto k = std::to_string(i);
    pos.push_back(b.add_node("l" + k));
    neg.push_back(b.add_node("nl" + k));
    x1.push_back(b.add_node("x1_" + k));
    x2.push_back(b.add_node("x2_" + k));
    x3.push_back(b.add_node("x3_" + k));
  }
  for (std::size_t p = 1; p <= sat.m(); ++p) {
    c1.push_back(b.add_node("C1_" + std::to_string(p)));
    c2.push_back(b.add_node("C2_" + std::to_string(p)));
  }
  struct Caps {
    std::int64_t nominal, scenario;
  };
  auto caps = [&](const std::string& tag) -> Caps {
    if (tag == "A_sl") return {0, m + 1};
    if (tag == "A_sx" || tag == "A_sC") return {1, 0};
    if (tag == "A_lx" || tag == "A_lC") return {0, 1};
    return {1, 1};
  };
  Scenario sc{"xi", 1, {}};
  auto arc = [&](NodeId u, NodeId v, const std::string& tag) {
    const Caps c = caps(tag);
    const ArcId a = b.add_arc(u, v, 0, Capacity(c.nominal), 0, tag);
    if (c.scenario != c.nominal) sc.overrides[a] = Capacity(c.scenario);
    return a;
  };
  for (std::size_t i = 0; i < sat.n; ++i) {
    arc(s, pos[i], "A_sl");
    arc(s, neg[i], "A_sl");
  }
  for (std::size_t i = 0; i < sat.n; ++i) arc(s, x1[i], "A_sx");
  for (std::size_t i = 0; i < sat.n; ++i) {
    arc(pos[i], x1[i], "A_lx");
    arc(neg[i], x1[i], "A_lx");
  }
  for (std::size_t i = 0; i < sat.n; ++i) {
    arc(x1[i], x2[i], "A_x");
    arc(x2[i], x3[i], "A_x");
  }
  for (std::size_t i = 0; i < sat.n; ++i) arc(x3[i], t, "A_xt");
  for (std::size_t p = 0; p < sat.m(); ++p) arc(s, c1[p], "A_sC");
  for (std::size_t p = 0; p < sat.m(); ++p)
    for (const auto& l : sat.clauses[p]) arc(l.positive ? pos[l.var - 1] : neg[l.var - 1], c1[p], "A_lC");
  for (std::size_t p = 0; p < sat.m(); ++p) arc(c1[p], c2[p], "A_C");
  for (std::size_t p = 0; p < sat.m(); ++p) arc(c2[p], t, "A_Ct");
  b.set_terminals(s, t);
  ReductionArtifact art;
  art.kind = ReductionKind::SatMfStructure;
  art.network = b.build();
  art.scenarios = FlowScenarioSet(UncertaintyKind::Capacity);
  art.scenarios.add(sc);
  art.distance = DistanceKind::Structure;
  art.c_star = n + m;
  art.yes_threshold = 3 * n + 2 * m;
  art.bracket_high = 4 * n + 3 * m;  // the empty scenario flow
  art.source = detail::describe(sat);
  return art;
}

/// The nominal flow fixed by the reactive corollaries: empty for the
/// 3-Partition construction, the unique maximum flow for the max-flow one.
inline IntegerFlow corollary_nominal(const ReductionArtifact& art) {
  switch (art.kind) {
    case ReductionKind::PartitionMcfStructure:
      return IntegerFlow::zero(art.network);
    case ReductionKind::SatMfStructure: {
      std::vector<std::int64_t> f(art.network.arc_count(), 0);
      for (ArcId a = 0; a < art.network.arc_count(); ++a) {
        const auto& tag = art.network.arc(a).tag;
        if (tag == "A_sx" || tag == "A_x" || tag == "A_xt" || tag == "A_sC" || tag == "A_C" || tag == "A_Ct") f[a] = 1;
      }
      return IntegerFlow(std::move(f));
    }
    default:
      throw ConfigError(std::string("reduction ") + to_string(art.kind) + " has no fixed nominal flow");
  }
}

// ---------------------------------------------------------------------------
// Certificates

/// Truth assignment read from the flow that carries the literal choice:
/// the nominal flow for the value-distance constructions, the scenario flow
/// for the max-flow structure one. nullopt unless cost equals the threshold.
inline std::optional<std::vector<bool>> decode_sat(const ReductionArtifact& art, const Sat3Instance& sat,
                                                   const IntegerFlow& nominal, const std::vector<IntegerFlow>& scenario_flows,
                                                   std::int64_t cost) {
  if (art.kind == ReductionKind::PartitionMcfStructure) throw ConfigError("not a 3-SAT reduction");
  if (cost != art.yes_threshold) return std::nullopt;
  const IntegerFlow& carrier = art.kind == ReductionKind::SatMfStructure ? scenario_flows.at(0) : nominal;
  std::vector<bool> assignment(sat.n, false);
  for (std::size_t i = 1; i <= sat.n; ++i) {
    const auto node = art.network.find_node("l" + std::to_string(i));
    for (ArcId a = 0; a < art.network.arc_count(); ++a) {
      const Arc& arc = art.network.arc(a);
      if (arc.tag == "A_sl" && arc.head == *node && carrier[a] > 0) assignment[i - 1] = true;
    }
  }
  return assignment;
}

/// Element i goes to the subset j with positive flow on (V_i, E_j).
inline std::optional<Partition> decode_partition(const ReductionArtifact& art, const ThreePartitionInstance& part,
                                                 const IntegerFlow& scenario_flow, std::int64_t cost) {
  if (art.kind != ReductionKind::PartitionMcfStructure) throw ConfigError("not a 3-partition reduction");
  if (cost != art.yes_threshold) return std::nullopt;
  Partition subsets(part.m);
  for (ArcId a = 0; a < art.network.arc_count(); ++a) {
    const Arc& arc = art.network.arc(a);
    if (arc.tag != "A_VE" || scenario_flow[a] == 0) continue;
    const std::size_t i = std::stoul(art.network.node_name(arc.tail).substr(1));
    const std::size_t j = std::stoul(art.network.node_name(arc.head).substr(1));
    subsets[j - 1].push_back(i);
  }
  return subsets;
}

inline bool verify_sat(const Sat3Instance& sat, const std::vector<bool>& assignment) {
  return sat.satisfied_by(assignment);
}

inline bool verify_partition(const ThreePartitionInstance& part, const Partition& subsets) {
  if (subsets.size() != part.m) return false;
  std::vector<int> seen(part.sizes.size(), 0);
  for (const auto& subset : subsets) {
    std::int64_t sum = 0;
    for (auto i : subset) {
      if (i < 1 || i > part.sizes.size()) return false;
      ++seen[i - 1];
      sum += part.sizes[i - 1];
    }
    if (sum != part.B) return false;
  }
  for (int c : seen)
    if (c != 1) return false;
  return true;
}

inline std::optional<std::vector<bool>> brute_force_sat(const Sat3Instance& sat, std::size_t max_vars = 24) {
  sat.validate();
  if (sat.n > max_vars) throw BudgetError("3-SAT brute force limited to " + std::to_string(max_vars) + " variables");
  std::vector<bool> a(sat.n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << sat.n); ++mask) {
    for (std::size_t i = 0; i < sat.n; ++i) a[i] = (mask >> i) & 1U;
    if (sat.satisfied_by(a)) return a;
  }
  return std::nullopt;
}

/// Backtracking over element-to-subset assignments, first element of each
/// new subset pinned to break symmetry.
inline std::optional<Partition> brute_force_partition(const ThreePartitionInstance& part, std::size_t max_elements = 30) {
  part.validate();
  if (part.sizes.size() > max_elements)
    throw BudgetError("3-partition brute force limited to " + std::to_string(max_elements) + " elements");
  std::vector<std::int64_t> load(part.m, 0);
  std::vector<std::size_t> where(part.sizes.size());
  std::function<bool(std::size_t)> rec = [&](std::size_t i) {
    if (i == part.sizes.size()) return true;
    for (std::size_t j = 0; j < part.m; ++j) {
      if (load[j] + part.sizes[i] > part.B) continue;
      const bool empty = load[j] == 0;
      load[j] += part.sizes[i];
      where[i] = j;
      if (rec(i + 1)) return true;
      load[j] -= part.sizes[i];
      if (empty) break;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  Partition out(part.m);
  for (std::size_t i = 0; i < where.size(); ++i) out[where[i]].push_back(i + 1);
  return out;
}

// ---------------------------------------------------------------------------
// Text formats


/// DIMACS CNF: "c" comments, "p cnf <n> <m>", then clauses of exactly three
/// nonzero literals each terminated by 0.
inline Sat3Instance parse_dimacs(std::istream& in) {
  Sat3Instance sat;
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> declared_m;
  std::vector<Literal> pending;
  std::size_t pending_line = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = text::tokenize(line, false);
    if (tokens.empty() || tokens[0].first[0] == 'c' || tokens[0].first == "%") continue;
    if (tokens[0].first == "p") {
      std::optional<long long> n, m;
      if (tokens.size() == 4 && tokens[1].first == "cnf") {
        n = text::parse_integer(tokens[2].first);
        m = text::parse_integer(tokens[3].first);
      }
      if (!n || !m || *n < 1 || *m < 1) throw ParseError("expected 'p cnf <variables> <clauses>'", lineno, 1);
      if (declared_m) throw ParseError("duplicate problem line", lineno, 1);
      sat.n = static_cast<std::size_t>(*n);
      declared_m = static_cast<std::size_t>(*m);
      continue;
    }
    if (!declared_m) throw ParseError("clause before the problem line", lineno, 1);
    for (const auto& [tok, col] : tokens) {
      const auto lit = text::parse_integer(tok);
      if (!lit) throw ParseError("bad literal '" + tok + "'", lineno, col);
      if (*lit == 0) {
        if (pending.size() != 3)
          throw ParseError("clause has " + std::to_string(pending.size()) + " literals, expected 3", lineno, col);
        sat.clauses.push_back({pending[0], pending[1], pending[2]});
        pending.clear();
        continue;
      }
      const auto var = static_cast<std::size_t>(*lit < 0 ? -*lit : *lit);
      if (var > sat.n) throw ParseError("literal " + tok + " exceeds the declared variable count", lineno, col);
      if (pending.empty()) pending_line = lineno;
      pending.push_back({var, *lit > 0});
    }
  }
  if (!pending.empty()) throw ParseError("unterminated clause", pending_line, 1);
  if (!declared_m) throw ParseError("missing problem line", lineno + 1, 1);
  if (sat.clauses.size() != *declared_m)
    throw ParseError("declared " + std::to_string(*declared_m) + " clauses, found " + std::to_string(sat.clauses.size()),
                     lineno + 1, 1);
  sat.validate();
  return sat;
}

inline Sat3Instance parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

inline void write_dimacs(std::ostream& os, const Sat3Instance& sat) {
  os << "p cnf " << sat.n << " " << sat.m() << "\n";
  for (const auto& c : sat.clauses) {
    for (const auto& l : c) os << (l.positive ? "" : "-") << l.var << " ";
    os << "0\n";
  }
}

/// "<m> <B>" on the first non-comment line, then the 3m sizes
/// (whitespace separated, may span lines). "#" starts a comment.
inline ThreePartitionInstance parse_partition(std::istream& in) {
  ThreePartitionInstance part;
  std::vector<long long> numbers;
  std::vector<std::pair<std::size_t, std::size_t>> where;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (const auto& [tok, col] : text::tokenize(line, true)) {
      const auto v = text::parse_integer(tok);
      if (!v || *v <= 0) throw ParseError("expected a positive integer, got '" + tok + "'", lineno, col);
      numbers.push_back(*v);
      where.push_back({lineno, col});
    }
  }
  if (numbers.size() < 2) throw ParseError("missing '<m> <B>' header", lineno + 1, 1);
  part.m = static_cast<std::size_t>(numbers[0]);
  part.B = numbers[1];
  for (std::size_t k = 2; k < numbers.size(); ++k) part.sizes.push_back(numbers[k]);
  if (part.sizes.size() != 3 * part.m) {
    const auto at = numbers.size() > 3 * part.m + 2 ? where[3 * part.m + 2] : std::make_pair(lineno + 1, std::size_t{1});
    throw ParseError("expected " + std::to_string(3 * part.m) + " sizes, found " + std::to_string(part.sizes.size()),
                     at.first, at.second);
  }
  part.validate();
  return part;
}

inline ThreePartitionInstance parse_partition(const std::string& text) {
  std::istringstream in(text);
  return parse_partition(in);
}

inline void write_partition(std::ostream& os, const ThreePartitionInstance& part) {
  os << part.m << " " << part.B << "\n";
  for (std::size_t i = 0; i < part.sizes.size(); ++i) os << (i ? " " : "") << part.sizes[i];
  os << "\n";
}

// ---------------------------------------------------------------------------
// Random instances

inline Sat3Instance random_sat(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  Sat3Instance sat;
  sat.n = n;
  std::uniform_int_distribution<std::size_t> var(1, n);
  std::bernoulli_distribution sign(0.5);
  for (std::size_t p = 0; p < m; ++p) {
    Clause c;
    for (auto& l : c) l = {var(rng), sign(rng)};
    sat.clauses.push_back(c);
  }
  return sat;
}

/// Valid 3-partition instance. With `planted` the sizes come from m triples
/// summing to B (a yes-instance); otherwise they are random in ]B/4, B/2[
/// with total mB, which may or may not be partitionable.
inline ThreePartitionInstance random_partition(std::mt19937_64& rng, std::size_t m, std::int64_t B, bool planted) {
  const std::int64_t lo = B / 4 + 1, hi = (B - 1) / 2;
  if (lo > hi || 3 * lo > B || 3 * hi < B) throw ConfigError("B too small for a 3-partition instance");
  ThreePartitionInstance part{m, B, {}};
  std::uniform_int_distribution<std::int64_t> size(lo, hi);
  if (planted) {
    for (std::size_t j = 0; j < m; ++j) {
      while (true) {
        const std::int64_t a = size(rng), b = size(rng), c = B - a - b;
        if (c >= lo && c <= hi) {
          part.sizes.insert(part.sizes.end(), {a, b, c});
          break;
        }
      }
    }
    std::shuffle(part.sizes.begin(), part.sizes.end(), rng);
  } else {
    part.sizes.resize(3 * m);
    for (auto& s : part.sizes) s = size(rng);
    std::int64_t diff = static_cast<std::int64_t>(m) * B - std::accumulate(part.sizes.begin(), part.sizes.end(), std::int64_t{0});
    std::uniform_int_distribution<std::size_t> pick(0, part.sizes.size() - 1);
    while (diff != 0) {
      auto& s = part.sizes[pick(rng)];
      if (diff > 0 && s < hi) {
        ++s;
        --diff;
      } else if (diff < 0 && s > lo) {
        --s;
        ++diff;
      }
    }
  }
  part.validate();
  return part;
}

/// The eight clauses over x1..x3 with every sign pattern; unsatisfiable.
inline Sat3Instance all_sign_patterns_formula() {
  Sat3Instance sat;
  sat.n = 3;
  for (int mask = 0; mask < 8; ++mask)
    sat.clauses.push_back({Literal{1, (mask & 1) == 0}, Literal{2, (mask & 2) == 0}, Literal{3, (mask & 4) == 0}});
  return sat;
}

/// C1 = (x1 | !x2 | x3), C2 = (!x1 | !x2 | !x3).
inline Sat3Instance figure_formula() {
  Sat3Instance sat;
  sat.n = 3;
  sat.clauses.push_back({Literal{1, true}, Literal{2, false}, Literal{3, true}});
  sat.clauses.push_back({Literal{1, false}, Literal{2, false}, Literal{3, false}});
  return sat;
}

}  // namespace solrob

#endif  // SOLROB_REDUCTIONS_HPP
