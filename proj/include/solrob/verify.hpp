#ifndef SOLROB_VERIFY_HPP
#define SOLROB_VERIFY_HPP

// Round trip for reduction instances: solve the proactive problem, compare
// the optimum with the yes-threshold, and check the answer against brute
// force on the source instance.

#include <sstream>
#include <string>
#include <vector>

#include "solrob/instance_io.hpp"
#include "solrob/robustmodels.hpp"

namespace solrob {

struct VerifyReport {
  ReductionKind kind = ReductionKind::SatMcfValue;
  RobustStatus status = RobustStatus::Infeasible;
  bool source_is_yes = false;
  std::int64_t optimum = 0;
  std::int64_t threshold = 0;
  std::int64_t bracket_high = 0;
  std::string certificate;  // decoded assignment or partition, when the optimum meets the threshold
  std::vector<std::string> failures;

  bool pass() const { return status == RobustStatus::Optimal && failures.empty(); }
};

inline VerifyReport verify_reduction(const FlowInstance& inst, const milp::Backend& backend = milp::reference_backend(),
                                     const milp::SolveBudget& budget = {}) {
  const ReductionArtifact art = rebuild_artifact(inst);
  const DecodedSource src = decode_source(*inst.meta_value("source"));
  VerifyReport rep;
  rep.kind = art.kind;
  rep.threshold = art.yes_threshold;
  rep.bracket_high = art.bracket_high;
  const auto sol = solve_proactive(art.network, art.spec(), backend, budget);
  rep.status = sol.status;
  if (sol.status != RobustStatus::Optimal) {
    rep.failures.push_back(std::string("solver status ") + to_string(sol.status));
    return rep;
  }
  rep.optimum = to_int64(sol.cost);
  if (sol.c_star != art.c_star) rep.failures.push_back("nominal optimum " + sol.c_star.str() + " differs from c*");
  std::ostringstream cert;
  if (src.sat) {
    rep.source_is_yes = brute_force_sat(*src.sat).has_value();
    const auto assignment = decode_sat(art, *src.sat, sol.nominal, sol.scenario_flows, rep.optimum);
    if (assignment) {
      for (std::size_t i = 0; i < assignment->size(); ++i) cert << (i ? " " : "") << "x" << i + 1 << "=" << (*assignment)[i];
      if (!verify_sat(*src.sat, *assignment)) rep.failures.push_back("decoded assignment does not satisfy the formula");
    }
  } else {
    rep.source_is_yes = brute_force_partition(*src.partition).has_value();
    const auto subsets = decode_partition(art, *src.partition, sol.scenario_flows.at(0), rep.optimum);
    if (subsets) {
      for (std::size_t j = 0; j < subsets->size(); ++j) {
        std::int64_t sum = 0;
        cert << (j ? " " : "") << "{";
        for (std::size_t k = 0; k < (*subsets)[j].size(); ++k) {
          cert << (k ? "," : "") << (*subsets)[j][k];
          sum += src.partition->sizes[(*subsets)[j][k] - 1];
        }
        cert << "}=" << sum;
      }
      if (!verify_partition(*src.partition, *subsets)) rep.failures.push_back("decoded subsets are not a 3-partition");
    }
  }
  rep.certificate = cert.str();
  if (rep.optimum < rep.threshold) rep.failures.push_back("optimum below the threshold");
  if (rep.optimum > rep.bracket_high) rep.failures.push_back("optimum above the proof's upper bracket");
  if (rep.source_is_yes && rep.optimum != rep.threshold)
    rep.failures.push_back("source is a yes-instance but the optimum misses the threshold");
  if (!rep.source_is_yes && rep.optimum == rep.threshold)
    rep.failures.push_back("source is a no-instance but the optimum meets the threshold");
  if (rep.source_is_yes && rep.certificate.empty()) rep.failures.push_back("no certificate decoded");
  return rep;
}

}  // namespace solrob

#endif  // SOLROB_VERIFY_HPP
