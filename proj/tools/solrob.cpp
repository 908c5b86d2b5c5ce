// solrob: command-line front end for the robust flow and line planning toolkit.
//
// Exit codes:
//   0  success (Optimal, or verify PASS)
//   1  internal error (numerical trouble, unexpected exception)
//   2  usage, parse or configuration error
//   3  infeasible
//   4  solver budget exceeded
//   5  verify FAIL
//   6  unbounded

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "solrob/case_study.hpp"
#include "solrob/instance_io.hpp"
#include "solrob/lop_io.hpp"
#include "solrob/mcfsolve.hpp"
#include "solrob/robustmodels.hpp"
#include "solrob/verify.hpp"

using namespace solrob;

namespace {

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kInfeasible = 3, kBudget = 4, kVerifyFail = 5, kUnbounded = 6 };

struct Options {
  std::string backend;
  std::size_t node_limit = 2'000'000;
  double time_limit = 3600;
  bool verbose = false;

  std::string mode;
  std::string input;
  std::string output;
  std::string nominal_file;

  std::string scenarios;
  std::optional<std::uint64_t> seed;
  std::string approaches = "proactive,anchored,kdist:0,kdist:1,kdist:2";
  std::string eps = "0,0.01,0.02,0.05";
  std::size_t count = 4;
  std::string basis = "frequencies";
  std::string format = "text";
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return in;
}

const milp::Backend& backend(const Options& o) {
  return o.backend.empty() ? milp::default_registry().get_default() : milp::default_registry().get(o.backend);
}

milp::SolveBudget budget(const Options& o) {
  if (o.node_limit == 0 || o.time_limit <= 0) throw ConfigError("budgets must be positive");
  milp::SolveBudget b;
  b.node_limit = o.node_limit;
  b.time_limit_seconds = o.time_limit;
  b.trace = o.verbose;
  return b;
}

int exit_for(RobustStatus s) {
  switch (s) {
    case RobustStatus::Optimal: return kOk;
    case RobustStatus::Infeasible: return kInfeasible;
    case RobustStatus::BudgetExceeded: return kBudget;
  }
  return kInternal;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

void write_flow_file(const std::string& path, const IntegerFlow& f) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write_flow(out, f);
}

// ---------------------------------------------------------------------------

int cmd_solve(const Options& o) {
  auto in = open_input(o.input);
  const FlowInstance inst = parse_instance(in);
  const FlowNetwork& net = inst.network;
  const bool mcf = net.kind() == NetworkKind::MinCostFlow;

  if (o.mode == "nominal") {
    const auto flow = mcf ? solve_min_cost_flow(net) : solve_max_flow(net);
    if (!flow) {
      std::cout << "status Infeasible\n";
      return kInfeasible;
    }
    std::cout << "status Optimal\n";
    std::cout << "objective " << (mcf ? flow_cost(net, *flow) : Rational(flow_value(net, *flow))).str() << "\n";
    write_flow_file(o.output, *flow);
    return kOk;
  }

  if (o.mode == "proactive") {
    const auto sol = solve_proactive(net, inst.spec, backend(o), budget(o));
    std::cout << "status " << to_string(sol.status) << "\n";
    if (!sol.infeasible_part.empty()) std::cout << "infeasible " << sol.infeasible_part << "\n";
    if (sol.status != RobustStatus::Infeasible || sol.infeasible_part != "nominal")
      std::cout << "c_star " << sol.c_star.str() << "\n";
    if (sol.has_solution) {
      std::cout << "objective " << sol.cost.str() << "\n";
      for (std::size_t i = 0; i < sol.distances.size(); ++i)
        std::cout << "scenario " << inst.spec.scenarios[i].id << " distance " << sol.distances[i] << "\n";
      write_flow_file(o.output, sol.nominal);
    }
    if (sol.status == RobustStatus::BudgetExceeded && sol.bound) std::cout << "bound " << sol.bound->str() << "\n";
    return exit_for(sol.status);
  }

  if (o.mode == "reactive") {
    IntegerFlow nominal;
    std::string origin;
    if (!o.nominal_file.empty()) {
      auto fin = open_input(o.nominal_file);
      nominal = parse_flow(fin);
      origin = o.nominal_file;
    } else if (inst.meta_value("reduction") &&
               (*inst.meta_value("reduction") == to_string(ReductionKind::PartitionMcfStructure) ||
                *inst.meta_value("reduction") == to_string(ReductionKind::SatMfStructure))) {
      nominal = corollary_nominal(rebuild_artifact(inst));
      origin = "reduction";
    } else {
      const auto flow = mcf ? solve_min_cost_flow(net) : solve_max_flow(net);
      if (!flow) {
        std::cout << "status Infeasible\ninfeasible nominal\n";
        return kInfeasible;
      }
      nominal = *flow;
      origin = "nominal optimum";
    }
    if (nominal.size() != net.arc_count()) throw ConfigError("nominal flow has the wrong number of arcs");
    std::cout << "nominal " << origin << "\n";
    Rational total = 0;
    RobustStatus worst = RobustStatus::Optimal;
    std::ostringstream lines;
    for (std::size_t i = 0; i < inst.spec.scenarios.size(); ++i) {
      const auto r = solve_reactive(inst.spec.scenarios.apply(net, i), nominal, inst.spec.distance, backend(o), budget(o));
      lines << "scenario " << inst.spec.scenarios[i].id << " ";
      if (r.has_solution) {
        lines << "distance " << r.cost;
        total += inst.spec.scenarios[i].weight * r.cost;
      } else {
        lines << "distance -";
      }
      if (r.status != RobustStatus::Optimal) lines << " " << to_string(r.status);
      lines << "\n";
      if (r.status == RobustStatus::Infeasible || (r.status == RobustStatus::BudgetExceeded && worst == RobustStatus::Optimal))
        worst = r.status;
    }
    std::cout << "status " << to_string(worst) << "\n";
    if (worst == RobustStatus::Optimal) std::cout << "objective " << total.str() << "\n";
    std::cout << lines.str();
    return exit_for(worst);
  }
  throw ConfigError("unknown solve mode '" + o.mode + "' (expected nominal, proactive or reactive)");
}

int cmd_reduce(const Options& o) {
  const ReductionKind kind = parse_reduction_kind(o.mode);
  auto in = open_input(o.input);
  FlowInstance inst;
  if (kind == ReductionKind::PartitionMcfStructure) {
    const auto part = parse_partition(in);
    inst = to_instance(reduce_partition_to_mcf_dstruct(part), encode_source(part));
  } else {
    const auto sat = parse_dimacs(in);
    const auto art = kind == ReductionKind::SatMcfValue  ? reduce_sat_to_mcf_dval(sat)
                     : kind == ReductionKind::SatMfValue ? reduce_sat_to_mf_dval(sat)
                                                         : reduce_sat_to_mf_dstruct(sat);
    inst = to_instance(art, encode_source(sat));
  }
  if (o.output.empty()) {
    write_instance(std::cout, inst);
  } else {
    std::ofstream out(o.output);
    if (!out) throw ConfigError("cannot write '" + o.output + "'");
    write_instance(out, inst);
    std::cout << "wrote " << o.output << " (" << inst.network.node_count() << " nodes, " << inst.network.arc_count()
              << " arcs)\n";
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  auto in = open_input(o.input);
  const FlowInstance inst = parse_instance(in);
  const VerifyReport rep = verify_reduction(inst, backend(o), budget(o));
  std::cout << "reduction " << to_string(rep.kind) << "\n";
  std::cout << "source " << (rep.source_is_yes ? "yes" : "no") << " (brute force)\n";
  std::cout << "status " << to_string(rep.status) << "\n";
  if (rep.status == RobustStatus::Optimal) std::cout << "optimum " << rep.optimum << "\n";
  std::cout << "threshold " << rep.threshold << "\n";
  std::cout << "bracket " << rep.threshold << ".." << rep.bracket_high << "\n";
  if (!rep.certificate.empty()) std::cout << "certificate " << rep.certificate << "\n";
  for (const auto& f : rep.failures) std::cout << "failure " << f << "\n";
  std::cout << (rep.pass() ? "PASS" : "FAIL") << "\n";
  if (rep.status == RobustStatus::BudgetExceeded) return kBudget;
  return rep.pass() ? kOk : kVerifyFail;
}

std::vector<std::size_t> scenario_counts(const Options& o, const lop::Instance& inst) {
  std::vector<std::size_t> counts;
  for (const auto& s : split(o.scenarios, ',')) {
    const auto v = text::parse_integer(s);
    if (!v || *v < 0) throw ConfigError("bad scenario count '" + s + "'");
    counts.push_back(static_cast<std::size_t>(*v));
  }
  if (counts.empty()) counts.push_back(inst.scenarios.size());
  return counts;
}

std::vector<lop::ApproachSpec> parse_approaches(const std::string& text, lop::Basis basis) {
  std::vector<lop::ApproachSpec> out;
  for (const auto& item : split(text, ',')) {
    lop::ApproachSpec spec;
    spec.basis = basis;
    if (item == "proactive") {
      spec.approach = lop::Approach::Proactive;
    } else if (item == "anchored") {
      spec.approach = lop::Approach::Anchored;
    } else if (item.rfind("kdist:", 0) == 0) {
      const auto k = text::parse_integer(item.substr(6));
      if (!k || *k < 0) throw ConfigError("bad k in '" + item + "'");
      spec.approach = lop::Approach::KDistance;
      spec.k = *k;
    } else {
      throw ConfigError("unknown approach '" + item + "' (expected proactive, anchored or kdist:K)");
    }
    out.push_back(spec);
  }
  if (out.empty()) throw ConfigError("no approaches given");
  return out;
}

int cmd_case_study(const Options& o) {
  auto in = open_input(o.input);
  lop::Instance inst = lop::parse_lop(in);
  const lop::Basis basis = lop::parse_basis(o.basis);
  if (o.format != "text" && o.format != "csv") throw ConfigError("format must be text or csv");
  auto counts = scenario_counts(o, inst);
  if (o.seed) {
    // Replace the file's scenarios by generated ones.
    const std::size_t n = *std::max_element(counts.begin(), counts.end());
    const auto ods = lop::gen_scenarios(inst.od0, n, *o.seed);
    inst.scenarios.clear();
    for (std::size_t s = 0; s < ods.size(); ++s) inst.scenarios.push_back({"g" + std::to_string(s + 1), 1, ods[s]});
  }
  const auto& be = backend(o);
  const auto b = budget(o);
  lop::Table table;
  std::string title;
  if (o.mode == "compare") {
    table = lop::compare_table(inst, counts, parse_approaches(o.approaches, basis), be, b);
    title = "approach comparison";
  } else if (o.mode == "epsilon-sweep") {
    std::vector<Rational> eps;
    for (const auto& e : split(o.eps, ',')) {
      const auto v = parse_rational(e);
      if (!v || *v < 0) throw ConfigError("bad epsilon '" + e + "'");
      eps.push_back(*v);
    }
    if (eps.empty()) throw ConfigError("no epsilon values given");
    table = lop::epsilon_table(inst, counts, eps, basis, be, b);
    title = "relaxed anchor sweep";
  } else if (o.mode == "reactive-table") {
    table = lop::reactive_table(inst, counts, o.count, basis, be, b);
    title = "reactive repair from diverse nominal optima";
  } else if (o.mode == "diverse") {
    table = lop::diverse_table(inst, o.count, basis, be, b);
    title = "diverse nominal optima";
  } else {
    throw ConfigError("unknown case study '" + o.mode + "' (expected compare, epsilon-sweep, reactive-table or diverse)");
  }
  if (o.format == "csv") {
    std::cout << lop::render_csv(table);
  } else {
    std::cout << "# " << title << ", " << lop::to_string(basis) << " basis\n" << lop::render_text(table);
  }
  return table.budget_exceeded ? kBudget : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust min-cost flow, max-flow and line planning toolkit"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--backend", o.backend, "MILP backend (default: $SOLROB_BACKEND or reference)");
  app.add_option("--node-limit", o.node_limit, "Branch-and-bound node limit")->capture_default_str();
  app.add_option("--time-limit", o.time_limit, "Time limit per MILP solve in seconds")->capture_default_str();
  app.add_flag("-v,--verbose", o.verbose, "Trace solver progress on stderr");

  auto* solve = app.add_subcommand("solve", "Solve a flow instance");
  solve->add_option("mode", o.mode, "nominal, proactive or reactive")->required();
  solve->add_option("instance", o.input, "Instance file")->required();
  solve->add_option("-o,--output", o.output, "Write the nominal flow here");
  solve->add_option("--nominal", o.nominal_file, "Nominal flow for reactive mode");

  auto* reduce = app.add_subcommand("reduce", "Build a reduction instance");
  reduce->add_option("kind", o.mode, "sat-mcf-dval, part-mcf-dstruct, sat-mf-dval or sat-mf-dstruct")->required();
  reduce->add_option("source", o.input, "DIMACS formula or 3-partition file")->required();
  reduce->add_option("-o,--output", o.output, "Output instance file (default: stdout)");

  auto* verify = app.add_subcommand("verify", "Solve a reduction instance and check it against brute force");
  verify->add_option("instance", o.input, "Instance written by reduce")->required();

  auto* cs = app.add_subcommand("case-study", "Line planning comparison tables");
  cs->add_option("study", o.mode, "compare, epsilon-sweep, reactive-table or diverse")->required();
  cs->add_option("instance", o.input, "Line planning instance")->required();
  cs->add_option("--scenarios", o.scenarios, "Comma-separated scenario counts (default: all)");
  cs->add_option("--seed", o.seed, "Generate the scenarios from the nominal demand with this seed");
  cs->add_option("--approaches", o.approaches, "proactive, anchored, kdist:K")->capture_default_str();
  cs->add_option("--eps", o.eps, "Comma-separated epsilon values")->capture_default_str();
  cs->add_option("--count", o.count, "Number of diverse nominal optima")->capture_default_str();
  cs->add_option("--basis", o.basis, "frequencies or deployment")->capture_default_str();
  cs->add_option("--format", o.format, "text or csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) return cmd_solve(o);
    if (*reduce) return cmd_reduce(o);
    if (*verify) return cmd_verify(o);
    return cmd_case_study(o);
  } catch (const ParseError& e) {
    std::cerr << "error: " << o.input << ":" << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const UnboundedError& e) {
    std::cerr << "unbounded: " << e.what() << "\n";
    return kUnbounded;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
