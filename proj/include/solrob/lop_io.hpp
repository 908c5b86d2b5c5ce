#ifndef SOLROB_LOP_IO_HPP
#define SOLROB_LOP_IO_HPP

// Text codec for line planning instances.
//
//   lop        := "solrob-lop 1" NL
//                 "capacity" INTEGER NL "max-frequency" INTEGER NL
//                 "line-cost" RATIONAL RATIONAL NL          default K and K'
//                 "stations" COUNT NL ("station" NAME NL){COUNT}
//                 "edges" COUNT NL ("edge" NAME NAME RATIONAL NL){COUNT}
//                 "od" COUNT NL pair{COUNT}                 nonzero nominal entries
//                 "lines" COUNT NL ("line" NAME NAME RATIONAL RATIONAL NL){COUNT}
//                 "scenarios" COUNT NL scenario{COUNT}
//                 "end" NL
//   pair       := "pair" NAME NAME INTEGER NL               origin destination demand
//   scenario   := "scenario" ID RATIONAL COUNT NL pair{COUNT}
//
// Lines are derived from the stations, edges and nominal matrix; "line"
// statements only override the default costs of an existing line. Scenario
// pairs override nominal entries, and unlisted entries keep the nominal value.

#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "solrob/instance_io.hpp"
#include "solrob/lop.hpp"

namespace solrob::lop {

namespace io_detail {

inline StationId station(const Network& net, const solrob::detail::LineReader& r,
                         const std::pair<std::string, std::size_t>& tok) {
  const auto s = net.find(tok.first);
  if (!s) throw ParseError("unknown station '" + tok.first + "'", r.line(), tok.second);
  return *s;
}

inline std::size_t count(solrob::detail::LineReader& r, const std::string& keyword) {
  const auto t = r.expect(keyword, 2, 2);
  return static_cast<std::size_t>(r.integer(t[1], 0));
}

}  // namespace io_detail

inline void write_lop(std::ostream& os, const Instance& inst) {
  inst.validate();
  for (const auto& s : inst.network.stations) solrob::detail::require_name(s, "station name");
  for (const auto& s : inst.scenarios) solrob::detail::require_name(s.id, "scenario id");
  // The most common cost pair becomes the default; the first one wins ties.
  Rational K = 0, Kp = 0;
  std::size_t best = 0;
  for (const auto& a : inst.lines) {
    std::size_t n = 0;
    for (const auto& b : inst.lines) n += a.K == b.K && a.K_prime == b.K_prime;
    if (n > best) {
      best = n;
      K = a.K;
      Kp = a.K_prime;
    }
  }
  const auto derived = build_lines(inst.network, inst.od0, K, Kp);
  bool same = derived.size() == inst.lines.size();
  for (std::size_t l = 0; same && l < derived.size(); ++l)
    same = derived[l].s1 == inst.lines[l].s1 && derived[l].s2 == inst.lines[l].s2 && derived[l].edges == inst.lines[l].edges;
  if (!same) throw StructuralError("lines do not match the network and nominal demand");
  const auto& names = inst.network.stations;
  os << "solrob-lop 1\n";
  os << "capacity " << inst.capacity << "\nmax-frequency " << inst.max_frequency << "\n";
  os << "line-cost " << K.str() << " " << Kp.str() << "\n";
  os << "stations " << names.size() << "\n";
  for (const auto& s : names) os << "station " << s << "\n";
  os << "edges " << inst.network.edges.size() << "\n";
  for (const auto& e : inst.network.edges) os << "edge " << names[e.u] << " " << names[e.v] << " " << e.length.str() << "\n";
  std::vector<std::string> pairs;
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = 0; j < names.size(); ++j)
      if (inst.od0[i][j] != 0)
        pairs.push_back("pair " + names[i] + " " + names[j] + " " + std::to_string(inst.od0[i][j]));
  os << "od " << pairs.size() << "\n";
  for (const auto& p : pairs) os << p << "\n";
  std::vector<std::size_t> custom;
  for (std::size_t l = 0; l < inst.lines.size(); ++l)
    if (inst.lines[l].K != K || inst.lines[l].K_prime != Kp) custom.push_back(l);
  os << "lines " << custom.size() << "\n";
  for (auto l : custom)
    os << "line " << names[inst.lines[l].s1] << " " << names[inst.lines[l].s2] << " " << inst.lines[l].K.str() << " "
       << inst.lines[l].K_prime.str() << "\n";
  os << "scenarios " << inst.scenarios.size() << "\n";
  for (const auto& sc : inst.scenarios) {
    std::vector<std::string> diff;
    for (std::size_t i = 0; i < names.size(); ++i)
      for (std::size_t j = 0; j < names.size(); ++j)
        if (sc.od[i][j] != inst.od0[i][j])
          diff.push_back("pair " + names[i] + " " + names[j] + " " + std::to_string(sc.od[i][j]));
    os << "scenario " << sc.id << " " << sc.weight.str() << " " << diff.size() << "\n";
    for (const auto& p : diff) os << p << "\n";
  }
  os << "end\n";
}

inline std::string to_lop_string(const Instance& inst) {
  std::ostringstream os;
  write_lop(os, inst);
  return os.str();
}

inline Instance parse_lop(std::istream& in) {
  using io_detail::count;
  using io_detail::station;
  solrob::detail::LineReader r(in);
  auto t = r.expect("solrob-lop", 2, 2);
  if (t[1].first != "1") throw ParseError("unsupported format version '" + t[1].first + "'", r.line(), t[1].second);
  Instance inst;
  t = r.expect("capacity", 2, 2);
  inst.capacity = r.integer(t[1], 1);
  t = r.expect("max-frequency", 2, 2);
  inst.max_frequency = r.integer(t[1], 1);
  t = r.expect("line-cost", 3, 3);
  const Rational K = r.rational(t[1]), Kp = r.rational(t[2]);
  if (K < 0) throw ParseError("line cost must be nonnegative", r.line(), t[1].second);
  if (Kp < 0) throw ParseError("line cost must be nonnegative", r.line(), t[2].second);

  const std::size_t n = count(r, "stations");
  for (std::size_t i = 0; i < n; ++i) {
    t = r.expect("station", 2, 2);
    if (inst.network.find(t[1].first)) throw ParseError("duplicate station '" + t[1].first + "'", r.line(), t[1].second);
    inst.network.stations.push_back(t[1].first);
  }
  const std::size_t m = count(r, "edges");
  for (std::size_t e = 0; e < m; ++e) {
    t = r.expect("edge", 4, 4);
    Edge edge{station(inst.network, r, t[1]), station(inst.network, r, t[2]), r.rational(t[3])};
    if (edge.u == edge.v) throw ParseError("edge is a loop", r.line(), t[2].second);
    if (edge.length <= 0) throw ParseError("edge length must be positive", r.line(), t[3].second);
    inst.network.edges.push_back(edge);
  }

  auto read_pair = [&](OdMatrix& od, std::set<std::pair<StationId, StationId>>& seen, std::int64_t min_value) {
    t = r.expect("pair", 4, 4);
    const StationId a = station(inst.network, r, t[1]), b = station(inst.network, r, t[2]);
    if (a == b) throw ParseError("demand from a station to itself", r.line(), t[2].second);
    if (!seen.insert({a, b}).second) throw ParseError("duplicate pair", r.line(), t[1].second);
    od[a][b] = r.integer(t[3], min_value);
    return std::pair{a, b};
  };

  inst.od0 = zero_od(n);
  {
    std::set<std::pair<StationId, StationId>> seen;
    const std::size_t k = count(r, "od");
    for (std::size_t i = 0; i < k; ++i) read_pair(inst.od0, seen, 1);
  }
  try {
    inst.lines = build_lines(inst.network, inst.od0, K, Kp);
  } catch (const StructuralError& e) {
    throw ParseError(e.what(), r.line(), 1);
  }
  const std::size_t custom = count(r, "lines");
  for (std::size_t i = 0; i < custom; ++i) {
    t = r.expect("line", 5, 5);
    StationId a = station(inst.network, r, t[1]), b = station(inst.network, r, t[2]);
    if (a > b) std::swap(a, b);
    auto it = std::find_if(inst.lines.begin(), inst.lines.end(), [&](const Line& l) { return l.s1 == a && l.s2 == b; });
    if (it == inst.lines.end()) throw ParseError("no line between these stations", r.line(), t[1].second);
    it->K = r.rational(t[3]);
    it->K_prime = r.rational(t[4]);
    if (it->K < 0 || it->K_prime < 0) throw ParseError("line cost must be nonnegative", r.line(), t[3].second);
  }
  const std::size_t scenarios = count(r, "scenarios");
  std::set<std::string> ids;
  for (std::size_t s = 0; s < scenarios; ++s) {
    t = r.expect("scenario", 4, 4);
    Scenario sc{t[1].first, r.rational(t[2]), inst.od0};
    if (!ids.insert(sc.id).second) throw ParseError("duplicate scenario id", r.line(), t[1].second);
    if (sc.weight <= 0) throw ParseError("scenario weight must be positive", r.line(), t[2].second);
    const std::size_t k = static_cast<std::size_t>(r.integer(t[3], 0));
    std::set<std::pair<StationId, StationId>> seen;
    for (std::size_t i = 0; i < k; ++i) {
      const auto [a, b] = read_pair(sc.od, seen, 0);
      if (inst.od0[a][b] == 0)
        throw ParseError("scenario demand where the nominal matrix has none", r.line(), 1);
    }
    inst.scenarios.push_back(std::move(sc));
  }
  r.expect("end", 1, 1);
  if (auto extra = r.next()) throw ParseError("content after 'end'", r.line(), (*extra)[0].second);
  return inst;
}

inline Instance parse_lop(const std::string& text) {
  std::istringstream in(text);
  return parse_lop(in);
}

}  // namespace solrob::lop

#endif  // SOLROB_LOP_IO_HPP
