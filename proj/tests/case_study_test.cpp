#include <gtest/gtest.h>

#include <fstream>

#include "solrob/case_study.hpp"
#include "solrob/lop_io.hpp"
#include "solrob/verify.hpp"
#include "test_support.hpp"

using namespace solrob;
using namespace solrob::lop;

TEST(RelativeChange, RoundsAndMarksSmallChanges) {
  EXPECT_EQ(relative_change(152, 100), "+52%");
  EXPECT_EQ(relative_change(98, 100), "-2%");
  EXPECT_EQ(relative_change(1001, 1000), "+<1%");
  EXPECT_EQ(relative_change(999, 1000), "-<1%");
  EXPECT_EQ(relative_change(0, 4), "-100%");
  EXPECT_EQ(relative_change(7, 7), "");
  EXPECT_EQ(relative_change(3, 0), "");
}

TEST(Render, TextAndCsvLayout) {
  Table t;
  t.columns = {"NO", "Distance"};
  t.blocks.push_back({2, {{"Proactive", {{"100", ""}, {"4", ""}}}, {"k, 0", {{"120", "+20%"}, {"0", "-100%"}}}}});
  const std::string rule(37, '-');
  EXPECT_EQ(render_text(t),
            "|S|  Method             NO   Distance\n" + rule +
                "\n"
                "2    Proactive         100          4\n"
                "     k, 0       120 (+20%)  0 (-100%)\n" +
                rule + "\n");
  EXPECT_EQ(render_csv(t),
            "scenarios,Method,NO,NO change,Distance,Distance change\n"
            "2,Proactive,100,,4,\n"
            "2,\"k, 0\",120,+20%,0,-100%\n");
}

TEST(Render, PercentLabels) {
  EXPECT_EQ(percent_label(0), "0%");
  EXPECT_EQ(percent_label(Rational(1, 100)), "1%");
  EXPECT_EQ(percent_label(Rational(5, 100)), "5%");
}

TEST(CaseStudy, ScenarioSelectionIsChecked) {
  std::ifstream in(fixtures::data_path("desk.lop"));
  const auto inst = parse_lop(in);
  EXPECT_EQ(first_scenarios(inst, 2).scenarios.size(), 2u);
  EXPECT_EQ(first_scenarios(inst, 2).scenarios[1].id, inst.scenarios[1].id);
  EXPECT_THROW(first_scenarios(inst, 4), ConfigError);
}

TEST(CaseStudy, CompareTableUsesProactiveAsReference) {
  std::ifstream in(fixtures::data_path("desk.lop"));
  const auto inst = parse_lop(in);
  const std::vector<ApproachSpec> specs{{Approach::Proactive, Basis::Frequencies, 0, 0},
                                        {Approach::KDistance, Basis::Frequencies, 0, 0}};
  const auto t = compare_table(inst, {2}, specs, milp::reference_backend(), {});
  ASSERT_EQ(t.blocks.size(), 1u);
  ASSERT_EQ(t.blocks[0].rows.size(), 2u);
  EXPECT_FALSE(t.budget_exceeded);
  const auto& pro = t.blocks[0].rows[0];
  const auto& k0 = t.blocks[0].rows[1];
  EXPECT_EQ(pro.label, "Proactive");
  for (const auto& cell : pro.cells) EXPECT_EQ(cell.change, "");
  EXPECT_EQ(k0.cells[1].value, "0");
  EXPECT_EQ(k0.cells[2].value, std::to_string(inst.lines.size()));
  EXPECT_EQ(k0.cells[1].change, pro.cells[1].value == "0" ? "" : "-100%");
}

TEST(CaseStudy, BudgetMarksRowsInsteadOfThrowing) {
  std::ifstream in(fixtures::data_path("desk.lop"));
  const auto inst = parse_lop(in);
  milp::SolveBudget tight;
  tight.node_limit = 200;
  const auto t = compare_table(inst, {3}, {{Approach::Anchored, Basis::Frequencies, 0, 0}}, milp::reference_backend(), tight);
  EXPECT_TRUE(t.budget_exceeded);
  EXPECT_NE(t.blocks[0].rows[0].label.find("[BudgetExceeded]"), std::string::npos);
}

TEST(Verify, FigureFixturesPass) {
  for (const char* name : {"fig1-sat.inst", "fig2-partition.inst", "fig3-sat.inst", "fig4-sat.inst"}) {
    std::ifstream in(fixtures::data_path(name));
    const auto rep = verify_reduction(parse_instance(in));
    EXPECT_TRUE(rep.pass()) << name;
    EXPECT_TRUE(rep.source_is_yes) << name;
    EXPECT_EQ(rep.optimum, rep.threshold) << name;
    EXPECT_FALSE(rep.certificate.empty()) << name;
  }
}

TEST(Verify, UnsatisfiableFormulaPassesAboveThreshold) {
  const auto sat = all_sign_patterns_formula();
  const auto rep = verify_reduction(to_instance(reduce_sat_to_mf_dstruct(sat), encode_source(sat)));
  EXPECT_TRUE(rep.pass());
  EXPECT_FALSE(rep.source_is_yes);
  EXPECT_GT(rep.optimum, rep.threshold);
  EXPECT_TRUE(rep.certificate.empty());
}

TEST(Verify, EditedInstanceIsRejected) {
  std::ifstream in(fixtures::data_path("fig4-sat.inst"));
  auto inst = parse_instance(in);
  FlowInstance other = to_instance(reduce_sat_to_mf_dstruct(all_sign_patterns_formula()),
                                   encode_source(all_sign_patterns_formula()));
  inst.network = other.network;
  EXPECT_THROW(verify_reduction(inst), ConfigError);
}
