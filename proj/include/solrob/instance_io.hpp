#ifndef SOLROB_INSTANCE_IO_HPP
#define SOLROB_INSTANCE_IO_HPP

// Text codecs for flow instances and flows.
//
// Instance grammar (one statement per line; blank lines and lines starting
// with '#' are ignored; tokens are separated by whitespace):
//
//   instance   := "solrob-instance 1" NL "problem" ("mcf" | "mf") NL meta*
//                 "nodes" COUNT NL node{COUNT} terminals?
//                 "arcs" COUNT NL arc{COUNT}
//                 "distance" ("value" | "structure") NL
//                 "anchor" ("exact" | "relaxed" RATIONAL) NL
//                 "scenarios" ("demand" | "capacity") COUNT NL scenario{COUNT}
//                 "end" NL
//   meta       := "meta" KEY TEXT NL            TEXT runs to the end of the line
//   node       := "node" NAME INTEGER NL        name and balance
//   terminals  := "source" NAME NL "sink" NAME NL
//   arc        := "arc" NAME NAME INTEGER CAP RATIONAL TAG? NL
//                                               tail head demand capacity cost
//   scenario   := "scenario" ID RATIONAL COUNT NL override{COUNT}
//   override   := "set" ARC_INDEX CAP NL
//   CAP        := INTEGER | "inf"
//
// Flow grammar: "solrob-flow 1", "arcs" COUNT, then "<arc> <value>" lines for
// the nonzero arcs in increasing order, then "end".

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "solrob/error.hpp"
#include "solrob/netcore.hpp"
#include "solrob/rational.hpp"
#include "solrob/reductions.hpp"
#include "solrob/robustmodels.hpp"
#include "solrob/text.hpp"

namespace solrob {

/// A network with its robust specification and free-form metadata.
struct FlowInstance {
  FlowNetwork network;
  RobustSpec spec;
  std::vector<std::pair<std::string, std::string>> meta;  // in file order

  std::optional<std::string> meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta)
      if (k == key) return v;
    return std::nullopt;
  }

  friend bool operator==(const FlowInstance& a, const FlowInstance& b) {
    return a.network == b.network && a.spec.distance == b.spec.distance && a.spec.scenarios == b.spec.scenarios &&
           a.spec.anchor == b.spec.anchor && a.meta == b.meta;
  }
};

namespace detail {

inline bool is_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '#') return false;
  return true;
}

inline void require_name(const std::string& s, const std::string& what) {
  if (!is_name(s)) throw StructuralError(what + " '" + s + "' is empty or contains whitespace or '#'");
}

/// Line reader that skips blanks and comments and remembers positions.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next statement's tokens, or nullopt at end of input.
  std::optional<std::vector<std::pair<std::string, std::size_t>>> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      raw_ = line;
      auto tokens = text::tokenize(line, false);
      if (tokens.empty() || tokens[0].first[0] == '#') continue;
      return tokens;
    }
    ++line_;
    return std::nullopt;
  }

  std::vector<std::pair<std::string, std::size_t>> expect(const std::string& keyword, std::size_t min_tokens,
                                                          std::size_t max_tokens) {
    auto tokens = next();
    if (!tokens) throw ParseError("unexpected end of input, expected '" + keyword + "'", line_, 1);
    if ((*tokens)[0].first != keyword)
      throw ParseError("expected '" + keyword + "', got '" + (*tokens)[0].first + "'", line_, (*tokens)[0].second);
    check_arity(*tokens, min_tokens, max_tokens);
    return *tokens;
  }

  void check_arity(const std::vector<std::pair<std::string, std::size_t>>& tokens, std::size_t lo,
                   std::size_t hi) const {
    if (tokens.size() < lo)
      throw ParseError("'" + tokens[0].first + "' needs " + std::to_string(lo - 1) + " arguments", line_,
                       raw_.size() + 1);
    if (tokens.size() > hi) throw ParseError("unexpected token '" + tokens[hi].first + "'", line_, tokens[hi].second);
  }

  std::int64_t integer(const std::pair<std::string, std::size_t>& tok, std::int64_t min_value) const {
    const auto v = text::parse_integer(tok.first);
    if (!v || *v < min_value) throw ParseError("bad integer '" + tok.first + "'", line_, tok.second);
    return *v;
  }

  Rational rational(const std::pair<std::string, std::size_t>& tok) const {
    const auto v = parse_rational(tok.first);
    if (!v) throw ParseError("bad rational '" + tok.first + "'", line_, tok.second);
    return *v;
  }

  Capacity capacity(const std::pair<std::string, std::size_t>& tok) const {
    if (tok.first == "inf") return Capacity::infinite();
    return Capacity(integer(tok, 0));
  }

  /// Text after the first `skip` tokens of the current line.
  std::string rest_of_line(const std::vector<std::pair<std::string, std::size_t>>& tokens, std::size_t skip) const {
    if (tokens.size() <= skip) return {};
    std::string s = raw_.substr(tokens[skip].second - 1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
  }

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::string raw_;
};

inline std::string format_rational(const Rational& r) { return r.str(); }

}  // namespace detail

inline void write_instance(std::ostream& os, const FlowInstance& inst) {
  const FlowNetwork& net = inst.network;
  os << "solrob-instance 1\n";
  os << "problem " << (net.kind() == NetworkKind::MinCostFlow ? "mcf" : "mf") << "\n";
  for (const auto& [k, v] : inst.meta) {
    detail::require_name(k, "meta key");
    const bool padded = !v.empty() && (std::isspace(static_cast<unsigned char>(v.front())) ||
                                       std::isspace(static_cast<unsigned char>(v.back())));
    if (v.find('\n') != std::string::npos || padded)
      throw StructuralError("meta '" + k + "' must be one line without surrounding blanks");
    os << "meta " << k;
    if (!v.empty()) os << " " << v;
    os << "\n";
  }
  std::set<std::string> names;
  os << "nodes " << net.node_count() << "\n";
  for (NodeId v = 0; v < net.node_count(); ++v) {
    detail::require_name(net.node_name(v), "node name");
    if (!names.insert(net.node_name(v)).second)
      throw StructuralError("node name '" + net.node_name(v) + "' is not unique");
    os << "node " << net.node_name(v) << " " << net.balance(v) << "\n";
  }
  if (net.has_terminals())
    os << "source " << net.node_name(*net.source()) << "\nsink " << net.node_name(*net.sink()) << "\n";
  os << "arcs " << net.arc_count() << "\n";
  for (const auto& arc : net.arcs()) {
    os << "arc " << net.node_name(arc.tail) << " " << net.node_name(arc.head) << " " << arc.lower << " "
       << arc.upper.str() << " " << detail::format_rational(arc.cost);
    if (!arc.tag.empty()) {
      detail::require_name(arc.tag, "arc tag");
      os << " " << arc.tag;
    }
    os << "\n";
  }
  os << "distance " << to_string(inst.spec.distance) << "\n";
  if (inst.spec.anchor.mode == Anchor::Mode::Exact)
    os << "anchor exact\n";
  else
    os << "anchor relaxed " << detail::format_rational(inst.spec.anchor.epsilon) << "\n";
  const auto& sc = inst.spec.scenarios;
  os << "scenarios " << (sc.kind() == UncertaintyKind::Demand ? "demand" : "capacity") << " " << sc.size() << "\n";
  for (const auto& s : sc.scenarios()) {
    detail::require_name(s.id, "scenario id");
    os << "scenario " << s.id << " " << detail::format_rational(s.weight) << " " << s.overrides.size() << "\n";
    for (const auto& [a, value] : s.overrides) os << "set " << a << " " << value.str() << "\n";
  }
  os << "end\n";
}

inline std::string to_instance_string(const FlowInstance& inst) {
  std::ostringstream os;
  write_instance(os, inst);
  return os.str();
}

inline FlowInstance parse_instance(std::istream& in) {
  detail::LineReader r(in);
  FlowInstance inst;
  {
    const auto t = r.expect("solrob-instance", 2, 2);
    if (t[1].first != "1") throw ParseError("unsupported format version '" + t[1].first + "'", r.line(), t[1].second);
  }
  NetworkKind kind;
  {
    const auto t = r.expect("problem", 2, 2);
    if (t[1].first == "mcf")
      kind = NetworkKind::MinCostFlow;
    else if (t[1].first == "mf")
      kind = NetworkKind::MaxFlow;
    else
      throw ParseError("problem must be 'mcf' or 'mf'", r.line(), t[1].second);
  }
  NetworkBuilder builder(kind);
  auto tokens = r.next();
  while (tokens && (*tokens)[0].first == "meta") {
    r.check_arity(*tokens, 2, SIZE_MAX);
    inst.meta.emplace_back((*tokens)[1].first, r.rest_of_line(*tokens, 2));
    tokens = r.next();
  }
  if (!tokens || (*tokens)[0].first != "nodes")
    throw ParseError("expected 'nodes'", r.line(), tokens ? (*tokens)[0].second : 1);
  r.check_arity(*tokens, 2, 2);
  const auto node_count = r.integer((*tokens)[1], 0);
  std::map<std::string, NodeId> ids;
  for (std::int64_t i = 0; i < node_count; ++i) {
    const auto t = r.expect("node", 3, 3);
    if (!ids.emplace(t[1].first, builder.node_count()).second)
      throw ParseError("duplicate node '" + t[1].first + "'", r.line(), t[1].second);
    const NodeId v = builder.add_node(t[1].first);
    const auto b = text::parse_integer(t[2].first);
    if (!b) throw ParseError("bad balance '" + t[2].first + "'", r.line(), t[2].second);
    builder.set_balance(v, *b);
  }
  auto node_ref = [&](const std::pair<std::string, std::size_t>& tok) {
    auto it = ids.find(tok.first);
    if (it == ids.end()) throw ParseError("unknown node '" + tok.first + "'", r.line(), tok.second);
    return it->second;
  };
  tokens = r.next();
  if (tokens && (*tokens)[0].first == "source") {
    r.check_arity(*tokens, 2, 2);
    const NodeId s = node_ref((*tokens)[1]);
    const auto t = r.expect("sink", 2, 2);
    builder.set_terminals(s, node_ref(t[1]));
    tokens = r.next();
  }
  if (!tokens || (*tokens)[0].first != "arcs")
    throw ParseError("expected 'arcs'", r.line(), tokens ? (*tokens)[0].second : 1);
  r.check_arity(*tokens, 2, 2);
  const auto arc_count = r.integer((*tokens)[1], 0);
  for (std::int64_t i = 0; i < arc_count; ++i) {
    const auto t = r.expect("arc", 6, 7);
    const NodeId tail = node_ref(t[1]);
    const NodeId head = node_ref(t[2]);
    const auto lower = r.integer(t[3], 0);
    const Capacity upper = r.capacity(t[4]);
    const Rational cost = r.rational(t[5]);
    builder.add_arc(tail, head, lower, upper, cost, t.size() == 7 ? t[6].first : std::string());
  }
  try {
    inst.network = builder.build();
  } catch (const StructuralError& e) {
    throw ParseError(e.what(), r.line(), 1);
  }
  {
    const auto t = r.expect("distance", 2, 2);
    if (t[1].first == "value")
      inst.spec.distance = DistanceKind::Value;
    else if (t[1].first == "structure")
      inst.spec.distance = DistanceKind::Structure;
    else
      throw ParseError("distance must be 'value' or 'structure'", r.line(), t[1].second);
  }
  {
    const auto t = r.expect("anchor", 2, 3);
    if (t[1].first == "exact" && t.size() == 2)
      inst.spec.anchor = Anchor::exact();
    else if (t[1].first == "relaxed" && t.size() == 3)
      inst.spec.anchor = Anchor::relaxed(r.rational(t[2]));
    else
      throw ParseError("anchor must be 'exact' or 'relaxed <epsilon>'", r.line(), t[1].second);
  }
  {
    const auto t = r.expect("scenarios", 3, 3);
    UncertaintyKind uk;
    if (t[1].first == "demand")
      uk = UncertaintyKind::Demand;
    else if (t[1].first == "capacity")
      uk = UncertaintyKind::Capacity;
    else
      throw ParseError("scenario kind must be 'demand' or 'capacity'", r.line(), t[1].second);
    FlowScenarioSet set(uk);
    const auto count = r.integer(t[2], 0);
    std::set<std::string> seen;
    for (std::int64_t i = 0; i < count; ++i) {
      const auto h = r.expect("scenario", 4, 4);
      if (!seen.insert(h[1].first).second)
        throw ParseError("duplicate scenario '" + h[1].first + "'", r.line(), h[1].second);
      Scenario sc;
      sc.id = h[1].first;
      sc.weight = r.rational(h[2]);
      const auto overrides = r.integer(h[3], 0);
      for (std::int64_t k = 0; k < overrides; ++k) {
        const auto o = r.expect("set", 3, 3);
        const auto a = static_cast<ArcId>(r.integer(o[1], 0));
        if (a >= inst.network.arc_count()) throw ParseError("arc index out of range", r.line(), o[1].second);
        if (!sc.overrides.emplace(a, r.capacity(o[2])).second)
          throw ParseError("arc " + o[1].first + " overridden twice", r.line(), o[1].second);
      }
      set.add(std::move(sc));
    }
    inst.spec.scenarios = std::move(set);
  }
  r.expect("end", 1, 1);
  if (auto extra = r.next()) throw ParseError("content after 'end'", r.line(), (*extra)[0].second);
  try {
    inst.spec.validate(inst.network);
  } catch (const Error& e) {
    throw ParseError(e.what(), r.line(), 1);
  }
  return inst;
}

inline FlowInstance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

// ---------------------------------------------------------------------------
// Flows

inline void write_flow(std::ostream& os, const IntegerFlow& flow) {
  os << "solrob-flow 1\narcs " << flow.size() << "\n";
  for (ArcId a = 0; a < flow.size(); ++a)
    if (flow[a] != 0) os << a << " " << flow[a] << "\n";
  os << "end\n";
}

inline std::string to_flow_string(const IntegerFlow& flow) {
  std::ostringstream os;
  write_flow(os, flow);
  return os.str();
}

inline IntegerFlow parse_flow(std::istream& in) {
  detail::LineReader r(in);
  const auto h = r.expect("solrob-flow", 2, 2);
  if (h[1].first != "1") throw ParseError("unsupported format version '" + h[1].first + "'", r.line(), h[1].second);
  const auto n = r.integer(r.expect("arcs", 2, 2)[1], 0);
  std::vector<std::int64_t> values(static_cast<std::size_t>(n), 0);
  std::optional<std::int64_t> last;
  while (true) {
    auto t = r.next();
    if (!t) throw ParseError("unexpected end of input, expected 'end'", r.line(), 1);
    if ((*t)[0].first == "end") {
      r.check_arity(*t, 1, 1);
      break;
    }
    r.check_arity(*t, 2, 2);
    const auto a = r.integer((*t)[0], 0);
    if (a >= n) throw ParseError("arc index out of range", r.line(), (*t)[0].second);
    if (last && a <= *last) throw ParseError("arc indices must increase", r.line(), (*t)[0].second);
    last = a;
    values[static_cast<std::size_t>(a)] = r.integer((*t)[1], 0);
  }
  if (auto extra = r.next()) throw ParseError("content after 'end'", r.line(), (*extra)[0].second);
  return IntegerFlow(std::move(values));
}

inline IntegerFlow parse_flow(const std::string& text) {
  std::istringstream in(text);
  return parse_flow(in);
}

// ---------------------------------------------------------------------------
// Reduction artifacts

/// Source instance on one line: "cnf <n> <literals, 0-terminated clauses>" or
/// "partition <m> <B> <sizes>".
inline std::string encode_source(const Sat3Instance& sat) {
  std::ostringstream os;
  os << "cnf " << sat.n;
  for (const auto& c : sat.clauses) {
    for (const auto& l : c) os << " " << (l.positive ? "" : "-") << l.var;
    os << " 0";
  }
  return os.str();
}

inline std::string encode_source(const ThreePartitionInstance& part) {
  std::ostringstream os;
  os << "partition " << part.m << " " << part.B;
  for (auto s : part.sizes) os << " " << s;
  return os.str();
}

inline FlowInstance to_instance(const ReductionArtifact& art, const std::string& encoded_source) {
  FlowInstance inst;
  inst.network = art.network;
  inst.spec = art.spec();
  inst.meta = {{"reduction", to_string(art.kind)},
               {"c_star", art.c_star.str()},
               {"threshold", std::to_string(art.yes_threshold)},
               {"bracket_high", std::to_string(art.bracket_high)},
               {"description", art.source},
               {"source", encoded_source}};
  return inst;
}

/// Source formula or partition stored by to_instance; exactly one is set.
struct DecodedSource {
  std::optional<Sat3Instance> sat;
  std::optional<ThreePartitionInstance> partition;
};

inline DecodedSource decode_source(const std::string& encoded) {
  std::istringstream in(encoded);
  std::string head;
  in >> head;
  DecodedSource out;
  if (head == "cnf") {
    std::size_t n = 0;
    if (!(in >> n)) throw ConfigError("source: missing variable count");
    std::vector<std::vector<long long>> clauses(1);
    long long lit;
    while (in >> lit) {
      if (lit == 0)
        clauses.emplace_back();
      else
        clauses.back().push_back(lit);
    }
    if (!clauses.back().empty()) throw ConfigError("source: unterminated clause");
    clauses.pop_back();
    std::ostringstream dimacs;
    dimacs << "p cnf " << n << " " << clauses.size() << "\n";
    for (const auto& c : clauses) {
      for (auto l : c) dimacs << l << " ";
      dimacs << "0\n";
    }
    out.sat = parse_dimacs(dimacs.str());
  } else if (head == "partition") {
    std::string rest;
    std::getline(in, rest);
    out.partition = parse_partition(rest);
  } else {
    throw ConfigError("source: unknown kind '" + head + "'");
  }
  return out;
}

/// Regenerates the artifact an instance was written from, using its
/// "reduction" and "source" metadata, and checks that the network and
/// scenarios match the file.
inline ReductionArtifact rebuild_artifact(const FlowInstance& inst) {
  const auto kind_text = inst.meta_value("reduction");
  const auto source_text = inst.meta_value("source");
  if (!kind_text || !source_text) throw ConfigError("instance carries no reduction metadata");
  const ReductionKind kind = parse_reduction_kind(*kind_text);
  const DecodedSource src = decode_source(*source_text);
  ReductionArtifact art;
  if (kind == ReductionKind::PartitionMcfStructure) {
    if (!src.partition) throw ConfigError("3-partition reduction needs a partition source");
    art = reduce_partition_to_mcf_dstruct(*src.partition);
  } else {
    if (!src.sat) throw ConfigError("3-SAT reduction needs a formula source");
    art = kind == ReductionKind::SatMcfValue  ? reduce_sat_to_mcf_dval(*src.sat)
          : kind == ReductionKind::SatMfValue ? reduce_sat_to_mf_dval(*src.sat)
                                              : reduce_sat_to_mf_dstruct(*src.sat);
  }
  if (!(art.network == inst.network) || art.distance != inst.spec.distance || !(art.scenarios == inst.spec.scenarios) ||
      !(inst.spec.anchor == Anchor::exact()))
    throw ConfigError("instance does not match the reduction of its source");
  return art;
}

}  // namespace solrob

#endif  // SOLROB_INSTANCE_IO_HPP
