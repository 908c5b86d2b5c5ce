// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exit status is nonzero when any gated criterion fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "solrob/case_study.hpp"
#include "solrob/instance_io.hpp"
#include "solrob/lop_io.hpp"
#include "solrob/mcfsolve.hpp"
#include "solrob/reductions.hpp"
#include "solrob/robustmodels.hpp"
#include "test_support.hpp"

using namespace solrob;

namespace {

// Pinned tolerances and sizes.
constexpr double kFigureSeconds = 60.0;    // per figure instance, reference solver
constexpr double kLopSolveSeconds = 120.0;  // per desk line planning solve
constexpr int kSatTrials = 50;
constexpr int kPartitionTrials = 24;
constexpr int kReactiveTrials = 100;
constexpr int kMinCostTrials = 100;

class Criterion {
 public:
  explicit Criterion(std::string title) : title_(std::move(title)) {}

  void check(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& line) { notes_.push_back(line); }

  bool report(int id) const {
    std::cout << (failures_.empty() ? "PASS" : "FAIL") << " " << id << " " << title_ << "\n";
    for (const auto& n : notes_) std::cout << "    " << n << "\n";
    for (const auto& f : failures_) std::cout << "    failed: " << f << "\n";
    std::cout.flush();
    return failures_.empty();
  }

 private:
  std::string title_;
  std::vector<std::string> notes_;
  std::vector<std::string> failures_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
auto timed(double& elapsed, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = f();
  elapsed = seconds_since(t0);
  return r;
}

std::string fmt(double s) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << s << " s";
  return os.str();
}

FlowInstance load_instance(const std::string& name) {
  std::ifstream in(fixtures::data_path(name));
  if (!in) throw ConfigError("missing fixture " + name);
  return parse_instance(in);
}

// Every max flow of the network has the given arc values: each arc's range
// over the optimal face, found by two LP-bounded MILPs, is a single point.
bool max_flow_is_unique(const FlowNetwork& net, const IntegerFlow& flow) {
  const std::int64_t value = flow_value(net, flow);
  for (ArcId a = 0; a < net.arc_count(); ++a) {
    for (auto sense : {milp::Sense::Minimize, milp::Sense::Maximize}) {
      milp::MilpModel model;
      const auto vars = detail::add_flow_copy(model, net, "u", circulation_bound(net), false);
      model.add_constraint("value", detail::nominal_objective(net, vars), milp::Relation::Equal, value);
      model.set_objective(sense, milp::LinearExpr().add(vars.x[a], 1));
      const auto r = milp::reference_backend().solve(model, {});
      if (r.status != milp::Status::Optimal || r.objective != flow.values()[a]) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

bool criterion_thresholds() {
  Criterion c("reduction thresholds on the figure instances and the unsatisfiable formula");
  double t = 0;

  {
    const auto inst = load_instance("fig1-sat.inst");
    const auto art = rebuild_artifact(inst);
    const auto sol = timed(t, [&] { return solve_proactive(inst.network, inst.spec); });
    const std::int64_t mn4 = 4 * 2 * 3;
    c.check(sol.status == RobustStatus::Optimal && sol.cost == mn4, "fig1 proactive MCF value optimum != 4mn");
    c.check(sol.c_star == 0, "fig1 c* != 0");
    c.check(t < kFigureSeconds, "fig1 took " + fmt(t));
    const auto a = decode_sat(art, figure_formula(), sol.nominal, sol.scenario_flows, to_int64(sol.cost));
    c.check(a && verify_sat(figure_formula(), *a), "fig1 certificate does not satisfy the formula");
    c.note("fig1 (sat-mcf-dval): optimum " + sol.cost.str() + " = 4mn = 24, c* " + sol.c_star.str() + ", " + fmt(t));
  }
  {
    std::ifstream src(fixtures::data_path("fig2.3p"));
    const auto part = parse_partition(src);
    const auto inst = load_instance("fig2-partition.inst");
    const auto art = rebuild_artifact(inst);
    const auto sol = timed(t, [&] { return solve_proactive(inst.network, inst.spec); });
    c.check(part.m == 2 && part.B == 100, "fig2 source is not m=2, B=100");
    c.check(sol.status == RobustStatus::Optimal && sol.cost == 7 * 2, "fig2 proactive optimum != 7m");
    c.check(t < kFigureSeconds, "fig2 took " + fmt(t));
    const auto re = solve_reactive(art.scenarios.apply(art.network, 0), corollary_nominal(art), DistanceKind::Structure);
    c.check(re.status == RobustStatus::Optimal && re.cost == 14, "fig2 reactive optimum != 7m");
    std::string sums;
    if (const auto subsets = decode_partition(art, part, sol.scenario_flows.at(0), to_int64(sol.cost))) {
      c.check(verify_partition(part, *subsets), "fig2 decoded subsets are not a partition");
      for (const auto& s : *subsets) {
        std::int64_t sum = 0;
        for (auto i : s) sum += part.sizes[i - 1];
        c.check(sum == 100, "fig2 subset sum " + std::to_string(sum));
        sums += (sums.empty() ? "" : ",") + std::to_string(sum);
      }
    } else {
      c.check(false, "fig2 partition not decoded");
    }
    c.note("fig2 (part-mcf-dstruct): proactive " + sol.cost.str() + ", reactive " + std::to_string(re.cost) +
           " = 7m = 14, sums (" + sums + "), " + fmt(t));
  }
  {
    const auto inst = load_instance("fig3-sat.inst");
    const auto sol = timed(t, [&] { return solve_proactive(inst.network, inst.spec); });
    const std::int64_t target = 2 * (3 * 3 + 2 * 2 - 1);
    c.check(sol.status == RobustStatus::Optimal && sol.cost == target, "fig3 proactive MF value optimum != m(3n+2m-1)");
    c.check(sol.c_star == 5, "fig3 c* != 5");
    c.check(t < kFigureSeconds, "fig3 took " + fmt(t));
    c.note("fig3 (sat-mf-dval): optimum " + sol.cost.str() + " = m(3n+2m-1) = 24, c* " + sol.c_star.str() + ", " + fmt(t));
  }
  {
    const auto inst = load_instance("fig4-sat.inst");
    const auto art = rebuild_artifact(inst);
    const auto sol = timed(t, [&] { return solve_proactive(inst.network, inst.spec); });
    const auto nominal = corollary_nominal(art);
    const auto re = solve_reactive(art.scenarios.apply(art.network, 0), nominal, DistanceKind::Structure);
    const std::int64_t target = 3 * 3 + 2 * 2;
    c.check(sol.status == RobustStatus::Optimal && sol.cost == target, "fig4 proactive MF structure optimum != 3n+2m");
    c.check(re.status == RobustStatus::Optimal && re.cost == target, "fig4 reactive optimum != 3n+2m");
    c.check(flow_value(art.network, nominal) == 5, "fig4 nominal value != 5");
    const bool unique = max_flow_is_unique(art.network, nominal);
    c.check(unique, "fig4 nominal max flow is not unique");
    c.check(t < kFigureSeconds, "fig4 took " + fmt(t));
    c.note("fig4 (sat-mf-dstruct): proactive " + sol.cost.str() + ", reactive " + std::to_string(re.cost) +
           " = 3n+2m = 13, max flow 5 " + (unique ? "unique" : "NOT unique") + ", " + fmt(t));
  }
  {
    const auto sat = all_sign_patterns_formula();
    c.check(!brute_force_sat(sat).has_value(), "all-patterns formula is satisfiable");
    for (const auto& art : {reduce_sat_to_mcf_dval(sat), reduce_sat_to_mf_dval(sat), reduce_sat_to_mf_dstruct(sat)}) {
      const auto sol = timed(t, [&] { return solve_proactive(art.network, art.spec()); });
      const std::string name = to_string(art.kind);
      const bool ok = sol.status == RobustStatus::Optimal && sol.cost > art.yes_threshold && sol.cost <= art.bracket_high;
      c.check(ok, "unsat " + name + " optimum " + sol.cost.str() + " outside (" + std::to_string(art.yes_threshold) +
                      ", " + std::to_string(art.bracket_high) + "]");
      c.note("unsat " + name + ": optimum " + sol.cost.str() + " in (" + std::to_string(art.yes_threshold) + ", " +
             std::to_string(art.bracket_high) + "], " + fmt(t));
    }
    // The proof brackets themselves, recomputed from n and m.
    const std::int64_t n = 3, m = 8;
    c.check(reduce_sat_to_mcf_dval(sat).bracket_high == 4 * m * n + 2 * m, "MCF value bracket");
    c.check(reduce_sat_to_mf_dval(sat).bracket_high == m * (3 * n + 2 * m + 1), "MF value bracket");
  }
  return c.report(1);
}

bool criterion_round_trip() {
  Criterion c("randomized reduction round trip: optimum meets the threshold iff brute force says yes");
  std::mt19937_64 rng(20240601);
  int yes = 0, no = 0, runs = 0;
  double worst = 0;
  for (int trial = 0; trial < kSatTrials; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const std::size_t m = 1 + (trial / 4) % 4;
    // Uniform formulas this small are nearly always satisfiable; every fifth
    // one gets a planted contradiction (v v v) and (~v ~v ~v).
    auto sat = random_sat(rng, n, m);
    if (trial % 5 == 4 && m >= 2) {
      const std::size_t v = 1 + static_cast<std::size_t>(rng() % n);
      sat.clauses[0] = {Literal{v, true}, Literal{v, true}, Literal{v, true}};
      sat.clauses[1] = {Literal{v, false}, Literal{v, false}, Literal{v, false}};
    }
    const bool truth = brute_force_sat(sat).has_value();
    (truth ? yes : no)++;
    for (const auto& art : {reduce_sat_to_mcf_dval(sat), reduce_sat_to_mf_dval(sat), reduce_sat_to_mf_dstruct(sat)}) {
      double t = 0;
      const auto sol = timed(t, [&] { return solve_proactive(art.network, art.spec()); });
      worst = std::max(worst, t);
      ++runs;
      if (sol.status != RobustStatus::Optimal) {
        c.check(false, "sat trial " + std::to_string(trial) + " " + to_string(art.kind) + " not optimal");
        continue;
      }
      const bool meets = sol.cost == art.yes_threshold;
      c.check(meets == truth, "sat trial " + std::to_string(trial) + " " + to_string(art.kind) + ": optimum " +
                                  sol.cost.str() + ", threshold " + std::to_string(art.yes_threshold) +
                                  ", brute force " + (truth ? "yes" : "no"));
    }
  }
  c.note(std::to_string(kSatTrials) + " formulas (n<=4, m<=4), " + std::to_string(yes) + " yes / " + std::to_string(no) +
         " no, " + std::to_string(runs) + " proactive solves over three reductions");
  int pyes = 0, pno = 0;
  for (int trial = 0; trial < kPartitionTrials; ++trial) {
    const std::size_t m = 1 + trial % 3;
    const auto part = random_partition(rng, m, 20 + trial % 13, trial % 2 == 0);
    const bool truth = brute_force_partition(part).has_value();
    (truth ? pyes : pno)++;
    const auto art = reduce_partition_to_mcf_dstruct(part);
    double t = 0;
    const auto sol = timed(t, [&] { return solve_proactive(art.network, art.spec()); });
    worst = std::max(worst, t);
    if (sol.status != RobustStatus::Optimal) {
      c.check(false, "partition trial " + std::to_string(trial) + " not optimal");
      continue;
    }
    c.check((sol.cost == art.yes_threshold) == truth, "partition trial " + std::to_string(trial) + ": optimum " +
                                                           sol.cost.str() + ", brute force " + (truth ? "yes" : "no"));
  }
  c.note(std::to_string(kPartitionTrials) + " 3-partition instances (m<=3), " + std::to_string(pyes) + " yes / " +
         std::to_string(pno) + " no; slowest solve " + fmt(worst));
  c.check(yes > 0 && no > 0, "SAT sample lacks yes or no instances");
  c.check(pyes > 0 && pno > 0, "partition sample lacks yes or no instances");
  return c.report(2);
}

bool criterion_reactive() {
  Criterion c("polynomial reactive value distance agrees with the MILP and brute force");
  std::mt19937_64 rng(77001);
  int compared = 0, infeasible = 0;
  for (int trial = 0; compared < kReactiveTrials && trial < 10 * kReactiveTrials; ++trial) {
    const auto kind = trial % 3 == 2 ? NetworkKind::MaxFlow : NetworkKind::MinCostFlow;
    const auto net = fixtures::random_network(rng, kind);
    const auto nominal = fixtures::random_flow(rng, net, 3);
    const auto naive = fixtures::naive_minimum(net, 0, [&](const IntegerFlow& f) {
      return Rational(distance(f, nominal, DistanceKind::Value));
    });
    const auto poly = reactive_value_distance(net, nominal);
    const auto exact = solve_reactive(net, nominal, DistanceKind::Value);
    const std::string id = "trial " + std::to_string(trial);
    c.check(naive.has_value() == poly.has_value(), id + ": feasibility differs (polynomial)");
    c.check(naive.has_value() == (exact.status == RobustStatus::Optimal), id + ": feasibility differs (MILP)");
    if (!naive || !poly || exact.status != RobustStatus::Optimal) {
      ++infeasible;
      continue;
    }
    c.check(*naive == poly->cost && *naive == exact.cost, id + ": brute force " + naive->str() + ", polynomial " +
                                                              std::to_string(poly->cost) + ", MILP " +
                                                              std::to_string(exact.cost));
    ++compared;
  }
  c.check(compared >= kReactiveTrials, "only " + std::to_string(compared) + " feasible instances");
  c.note(std::to_string(compared) + " feasible instances compared three ways, " + std::to_string(infeasible) +
         " infeasible agreed");
  return c.report(3);
}

bool criterion_min_cost() {
  Criterion c("min-cost flow solver matches exhaustive enumeration");
  std::mt19937_64 rng(55002);
  fixtures::RandomNetworkOptions opt;
  opt.max_nodes = 6;
  opt.max_arcs = 8;
  opt.max_capacity = 3;
  int compared = 0, infeasible = 0;
  for (int trial = 0; compared < kMinCostTrials && trial < 10 * kMinCostTrials; ++trial) {
    const auto net = fixtures::random_network(rng, NetworkKind::MinCostFlow, opt);
    const auto oracle = fixtures::naive_minimum(net, 0, [&](const IntegerFlow& f) { return flow_cost(net, f); });
    const auto f = solve_min_cost_flow(net);
    const std::string id = "trial " + std::to_string(trial);
    c.check(f.has_value() == oracle.has_value(), id + ": feasibility differs");
    if (!f || !oracle) {
      ++infeasible;
      continue;
    }
    c.check(is_feasible(net, *f), id + ": solver flow infeasible");
    c.check(flow_cost(net, *f) == *oracle, id + ": cost " + flow_cost(net, *f).str() + " vs " + oracle->str());
    ++compared;
  }
  c.check(compared >= kMinCostTrials, "only " + std::to_string(compared) + " feasible instances");
  c.note(std::to_string(compared) + " feasible instances (<=6 nodes, <=8 arcs, u<=3), " + std::to_string(infeasible) +
         " infeasible agreed");
  return c.report(4);
}

bool criterion_lop() {
  using namespace lop;
  Criterion c("line planning desk-scale properties");
  std::ifstream in(fixtures::data_path("desk.lop"));
  const Instance full = parse_lop(in);
  double slowest = 0;
  std::string slowest_what;
  auto run = [&](const std::string& what, auto&& f) {
    double t = 0;
    auto r = timed(t, f);
    if (t > slowest) {
      slowest = t;
      slowest_what = what;
    }
    c.check(t < kLopSolveSeconds, what + " took " + fmt(t));
    return r;
  };
  const auto [c_star, nominal] = run("nominal", [&] { return solve_nominal(full); });
  c.note("desk: " + std::to_string(full.network.stations.size()) + " stations, " +
         std::to_string(full.network.edges.size()) + " edges, " + std::to_string(full.lines.size()) + " lines, c* " +
         c_star.str());

  for (Basis basis : {Basis::Frequencies, Basis::Deployment}) {
    for (std::size_t s = 1; s <= full.scenarios.size(); ++s) {
      const Instance inst = first_scenarios(full, s);
      const std::string tag = std::string(to_string(basis)) + " |S|=" + std::to_string(s);
      auto solve = [&](const ApproachSpec& spec) {
        const auto r = run(tag + " " + spec.label(), [&] { return solve_lop(inst, spec, c_star); });
        c.check(r.status == RobustStatus::Optimal, tag + " " + spec.label() + " not optimal");
        return r;
      };

      // (a) and (b)
      const auto k0 = solve({Approach::KDistance, basis, 0, 0});
      c.check(k0.metrics.distance == 0, tag + " (a) k=0 distance " + std::to_string(k0.metrics.distance));
      c.check(k0.metrics.anchored == inst.lines.size(), tag + " (a) k=0 anchors " + std::to_string(k0.metrics.anchored));
      Rational prev = k0.objective;
      std::string ks = k0.objective.str();
      for (std::int64_t k : std::vector<std::int64_t>{1, 2, 4, 8, static_cast<std::int64_t>(inst.lines.size())}) {
        const auto r = solve({Approach::KDistance, basis, 0, k});
        c.check(r.objective <= prev, tag + " (b) NO increased at k=" + std::to_string(k));
        prev = r.objective;
        ks += " " + r.objective.str();
      }
      c.check(prev == c_star, tag + " (b) NO(|L|) = " + prev.str() + " != c*");

      // (c)
      const auto pro = solve({Approach::Proactive, basis, 0, 0});
      const auto anc = solve({Approach::Anchored, basis, 0, 0});
      c.check(pro.metrics.distance <= anc.metrics.distance, tag + " (c) proactive distance above anchored");
      c.check(anc.metrics.anchored >= pro.metrics.anchored, tag + " (c) anchored count below proactive");

      // (d)
      std::int64_t prev_d = -1;
      std::string ds;
      for (const Rational& eps : {Rational(0), Rational(1, 100), Rational(2, 100), Rational(5, 100)}) {
        const auto r = solve({Approach::Proactive, basis, eps, 0});
        if (prev_d >= 0) c.check(r.metrics.distance <= prev_d, tag + " (d) distance grew at eps " + eps.str());
        prev_d = r.metrics.distance;
        ds += (ds.empty() ? "" : " ") + std::to_string(r.metrics.distance);
      }

      // (e)
      auto reactive_sum = [&](const Solution& from) {
        std::int64_t sum = 0;
        for (const auto& sc : inst.scenarios) {
          const auto r = run(tag + " reactive", [&] { return solve_reactive(inst, sc.od, from, basis); });
          c.check(r.status == RobustStatus::Optimal, tag + " (e) reactive not optimal");
          c.check(sc.weight == 1, "unit weights expected");
          sum += r.cost;
        }
        return sum;
      };
      const std::int64_t from_pro = reactive_sum(pro.nominal);
      c.check(Rational(from_pro) == pro.objective,
              tag + " (e) reactive sum " + std::to_string(from_pro) + " != proactive " + pro.objective.str());
      const auto picks = run(tag + " diverse", [&] { return generate_diverse_nominals(inst, c_star, 3, basis); });
      std::string es;
      for (const auto& p : picks) {
        const std::int64_t sum = reactive_sum(p.solution);
        c.check(Rational(sum) >= pro.objective, tag + " (e) diverse reactive sum below proactive");
        es += (es.empty() ? "" : " ") + std::to_string(sum);
      }
      c.note(tag + ": NO(k) " + ks + "; distance proactive " + std::to_string(pro.metrics.distance) + " anchored " +
             std::to_string(anc.metrics.distance) + "; anchored lines " + std::to_string(pro.metrics.anchored) + " / " +
             std::to_string(anc.metrics.anchored) + "; eps distances " + ds + "; reactive sums " +
             std::to_string(from_pro) + " | " + es);
    }
  }
  c.note("slowest solve " + fmt(slowest) + " (" + slowest_what + "), limit " + fmt(kLopSolveSeconds));
  return c.report(5);
}

void criterion_full_scale() {
  std::cout << "SKIP 6 full-scale reproduction with an external backend and the original dataset (not gated)\n"
               "    no external MILP backend or dataset import ships with this build; see README\n";
}

bool criterion_determinism() {
  Criterion c("seeded commands give byte-identical machine-readable output");
  std::ifstream in(fixtures::data_path("desk.lop"));
  const lop::Instance desk = lop::parse_lop(in);
  auto seeded_table = [&] {
    lop::Instance inst = desk;
    inst.scenarios.clear();
    const auto ods = lop::gen_scenarios(inst.od0, 2, 11);
    for (std::size_t s = 0; s < ods.size(); ++s) inst.scenarios.push_back({"g" + std::to_string(s + 1), 1, ods[s]});
    const std::vector<lop::ApproachSpec> specs{{lop::Approach::Proactive, lop::Basis::Frequencies, 0, 0},
                                               {lop::Approach::Anchored, lop::Basis::Frequencies, 0, 0},
                                               {lop::Approach::KDistance, lop::Basis::Frequencies, 0, 1}};
    return lop::render_csv(lop::compare_table(inst, {1, 2}, specs, milp::reference_backend(), {})) +
           lop::to_lop_string(inst);
  };
  const std::string t1 = seeded_table(), t2 = seeded_table();
  c.check(t1 == t2, "seeded case-study table differs between runs");

  std::mt19937_64 r1(9), r2(9);
  auto reduce_once = [](std::mt19937_64& rng) {
    const auto sat = random_sat(rng, 4, 3);
    const auto art = reduce_sat_to_mf_dstruct(sat);
    const auto sol = solve_proactive(art.network, art.spec());
    return to_instance_string(to_instance(art, encode_source(sat))) + to_flow_string(sol.nominal) + sol.cost.str();
  };
  c.check(reduce_once(r1) == reduce_once(r2), "seeded reduction and solve differ between runs");
  c.note("case-study csv: " + std::to_string(t1.size()) + " bytes identical; reduction and proactive flow identical");
  c.note("the CLI is covered separately by the cli_determinism test");
  return c.report(7);
}

}  // namespace

int main() {
  int failed = 0;
  const std::vector<std::pair<int, std::function<bool()>>> gated{
      {1, criterion_thresholds}, {2, criterion_round_trip}, {3, criterion_reactive},
      {4, criterion_min_cost},   {5, criterion_lop},        {7, criterion_determinism}};
  for (const auto& [id, f] : gated) {
    if (id == 7) criterion_full_scale();
    try {
      if (!f()) ++failed;
    } catch (const std::exception& e) {
      std::cout << "FAIL " << id << " threw: " << e.what() << "\n";
      ++failed;
    }
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed\n" : "acceptance: all gated criteria passed\n");
  return failed ? 1 : 0;
}
