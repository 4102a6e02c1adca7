#include <gtest/gtest.h>

#include "cobstruct/pipeline.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace cobstruct;
using namespace testsupport;

namespace {

std::string paper_text() { return read_file(source_path("scenarios/paper_cp7.json")); }
std::string fixture(const std::string& name) { return read_file(source_path("tests/data/" + name)); }

std::string validation_message(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

std::string with_edit(const std::string& text, const std::function<void(nlohmann::json&)>& edit) {
  auto doc = nlohmann::json::parse(text);
  edit(doc);
  return doc.dump();
}

}  // namespace

// ---------------------------------------------------------------------------
// parsing

TEST(ParseGroup, Syntax) {
  EXPECT_EQ(parse_group("0"), FgAbGroup::zero());
  EXPECT_EQ(parse_group("Z"), FgAbGroup::free(1));
  EXPECT_EQ(parse_group("Z^2 + Z/2"), FgAbGroup::from_cyclic_orders({0, 0, 2}));
  EXPECT_EQ(parse_group("(Z/2)^4"), FgAbGroup::elementary_two(4));
  EXPECT_EQ(parse_group("Z/2+Z/3"), FgAbGroup::cyclic(6));
  EXPECT_THROW(parse_group("Q"), ValidationError);
  EXPECT_THROW(parse_group("Z/0"), ValidationError);
}

TEST(ParseScenario, BundledPaperScenario) {
  ObstructionScenario sc = parse_scenario(paper_text());
  EXPECT_EQ(sc.name, "paper_cp7");
  ASSERT_EQ(sc.lagrangians.size(), 3u);
  EXPECT_EQ(sc.lagrangian("L1").maslov, 4);
  EXPECT_EQ(sc.lagrangian("L2").maslov, 8);
  EXPECT_FALSE(sc.lagrangian("L").maslov.has_value());
  EXPECT_EQ(sc.lagrangian("L1").space->dimension(), 7);
  ASSERT_EQ(sc.intersections.size(), 2u);
  EXPECT_EQ(sc.intersections[0].surgery, "L");
  EXPECT_EQ(sc.intersections[0].restriction_surjective_degrees, (std::vector<int>{1, 2}));
  ASSERT_EQ(sc.claims.size(), 2u);
  EXPECT_EQ(sc.claims[0].first_end, "L2");
  EXPECT_EQ(sc.claims[0].second_end, "L1");
  EXPECT_EQ(sc.probe, "L2");
  EXPECT_EQ(sc.grading.t_degree(), -2);
  EXPECT_EQ(sc.solver.entry_bound, 4);
}

TEST(ParseScenario, NoLagrangians) {
  auto text = with_edit(paper_text(), [](auto& d) { d["lagrangians"] = nlohmann::json::array(); });
  EXPECT_NE(validation_message(text).find("no Lagrangians"), std::string::npos);
}

TEST(ParseScenario, OddGradingCitesEvenness) {
  try {
    parse_scenario(fixture("neg_grading_odd.json"));
    FAIL() << "expected an admissibility error";
  } catch (const AdmissibilityError& e) {
    EXPECT_EQ(e.hypothesis(), "evenness");
    EXPECT_NE(std::string(e.what()).find("even"), std::string::npos);
  }
}

TEST(ParseScenario, Diagnostics) {
  const std::string base = paper_text();
  struct Case {
    std::function<void(nlohmann::json&)> edit;
    std::string needle;
  };
  const std::vector<Case> cases = {
      {[](auto& d) { d["schema"] = 2; }, "$.schema"},
      {[](auto& d) { d["colour"] = "blue"; }, "colour"},
      {[](auto& d) { d["claims"][0]["ends"][1] = "L9"; }, "$.claims[0].ends[1]"},
      {[](auto& d) { d["intersections"][0]["space"] = "Q"; }, "dangling space name"},
      {[](auto& d) { d["lagrangians"][1]["maslov"] = 7; }, "$.lagrangians[1].maslov"},
      {[](auto& d) { d["lagrangians"][1]["name"] = "L1"; }, "duplicate"},
      {[](auto& d) { d["lagrangians"][1]["ambient"] = 5; }, "$.lagrangians[1]"},
      {[](auto& d) { d["spaces"]["RP7"] = {{"torus", 2}}; }, "unknown space constructor"},
      {[](auto& d) { d.erase("probe"); }, "probe"},
      {[](auto& d) { d["grading"] = 0; }, "$.grading"},
      {[](auto& d) { d["solver"]["entry_bound"] = 0; }, "$.solver.entry_bound"},
  };
  for (const auto& c : cases) {
    const std::string msg = validation_message(with_edit(base, c.edit));
    EXPECT_NE(msg.find(c.needle), std::string::npos) << "message: " << msg;
  }
  EXPECT_NE(validation_message("{not json").find("malformed JSON"), std::string::npos);
}

TEST(ParseScenario, SurgeryNeedsCleanConnectedIntersection) {
  auto text = with_edit(paper_text(), [](auto& d) { d["intersections"][0]["connected"] = false; });
  try {
    parse_scenario(text);
    FAIL() << "expected an admissibility error";
  } catch (const AdmissibilityError& e) {
    EXPECT_EQ(e.hypothesis(), "clean connected intersection");
  }
}

TEST(ParseScenario, RoundTrip) {
  for (const std::string& text : {paper_text(), fixture("symmetric_ends.json"), fixture("branch_tables.json"),
                                  fixture("neg_probe_maslov.json"), fixture("neg_common_divisor.json")}) {
    ObstructionScenario a = parse_scenario(text);
    ObstructionScenario b = parse_scenario(serialize_scenario(a));
    EXPECT_TRUE(a == b) << serialize_scenario(a);
    EXPECT_EQ(serialize_scenario(a), serialize_scenario(b));
  }
}

// ---------------------------------------------------------------------------
// pipeline

TEST(Run, PaperVerdicts) {
  RunReport r = run(parse_scenario(paper_text()));
  ASSERT_EQ(r.claims.size(), 2u);
  EXPECT_EQ(r.claims[0].claim.first_end, "L2");
  EXPECT_TRUE(r.claims[0].infeasible);
  EXPECT_EQ(r.claims[0].branches.size(), 2u);
  EXPECT_FALSE(r.claims[1].infeasible);
  EXPECT_TRUE(r.any_infeasible());
  ASSERT_EQ(r.established.size(), 1u);
  EXPECT_EQ(r.established[0].label(), "L ~> (L1, L2)");
  ASSERT_EQ(r.spin_checks.size(), 1u);
  EXPECT_TRUE(r.spin_checks[0].passed);
}

TEST(Run, SymmetricEndsGiveIdenticalVerdicts) {
  RunReport r = run(parse_scenario(fixture("symmetric_ends.json")));
  ASSERT_EQ(r.claims.size(), 3u);
  EXPECT_EQ(r.claims[0].infeasible, r.claims[1].infeasible);
  for (const auto& c : r.claims) EXPECT_FALSE(c.infeasible) << c.claim.label();
  for (const auto& c : r.claims)
    for (const auto& b : c.branches) ASSERT_TRUE(b.verdict.witness.has_value());
}

TEST(Run, BranchTablesOnly) {
  RunReport r = run(parse_scenario(fixture("branch_tables.json")));
  EXPECT_TRUE(r.claims.empty());
  ASSERT_EQ(r.hf_tables.size(), 2u);
  EXPECT_EQ(r.hf_tables[0].pair_label(), "(L2, L2)");
  ASSERT_EQ(r.hf_tables[0].branches.size(), 1u);
  EXPECT_EQ(r.hf_tables[0].branches[0].folded->at(1), FgAbGroup::elementary_two(4));
  EXPECT_EQ(r.hf_tables[0].branches[0].folded->at(0), FgAbGroup::zero());
  ASSERT_EQ(r.hf_tables[1].branches.size(), 2u);
  EXPECT_EQ(r.hf_tables[1].branches[0].folded->at(0), FgAbGroup::zero());
  EXPECT_EQ(r.hf_tables[1].branches[1].folded->at(0), FgAbGroup::elementary_two(2));
  EXPECT_EQ(r.hf_tables[1].branches[1].folded->at(1), FgAbGroup::elementary_two(2));
}

TEST(Run, TextAndJsonVerdictsAgree) {
  RunReport r = run(parse_scenario(paper_text()));
  auto doc = report_json(r);
  const std::string text = render_text(r);
  ASSERT_EQ(doc["claims"].size(), r.claims.size());
  for (std::size_t i = 0; i < r.claims.size(); ++i) {
    const std::string verdict = doc["claims"][i]["verdict"];
    EXPECT_EQ(verdict, verdict_word(r.claims[i]));
    EXPECT_NE(text.find(r.claims[i].claim.label() + ": " + verdict), std::string::npos) << text;
  }
}

TEST(Run, Deterministic) {
  const auto sc = parse_scenario(paper_text());
  EXPECT_EQ(render_text(run(sc)), render_text(run(sc)));
  EXPECT_EQ(render_json(run(sc)), render_json(run(sc)));
}

TEST(Run, StageErrorsNameTheirStage) {
  auto text = with_edit(paper_text(), [](auto& d) { d["solver"]["entry_bound"] = 1; });
  // entry bound 1 cannot produce the multiplication-by-2 differential
  try {
    run(parse_scenario(text));
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("stage claims"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("branch-bound"), std::string::npos) << e.what();
  }
}

// ---------------------------------------------------------------------------
// command line

TEST(Cli, PaperScenarioMatchesGoldens) {
  const std::string trace = tmp_path("cli_cp7.trace.txt");
  const std::string json = tmp_path("cli_cp7.json");
  auto r = run_cli("check \"" + source_path("scenarios/paper_cp7.json") + "\" --emit-trace \"" + trace +
                       "\" --json \"" + json + "\"",
                   "cli_cp7");
  EXPECT_EQ(r.exit_code, 10) << r.err;
  EXPECT_EQ(r.out, read_file(source_path("tests/golden/paper_cp7.summary.txt")));
  EXPECT_EQ(read_file(trace), read_file(source_path("tests/golden/paper_cp7.trace.txt")));
  EXPECT_EQ(read_file(json), read_file(source_path("tests/golden/paper_cp7.json")));
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  auto a = run_cli("check \"" + source_path("scenarios/paper_cp7.json") + "\"", "cli_repeat_a");
  auto b = run_cli("check \"" + source_path("scenarios/paper_cp7.json") + "\"", "cli_repeat_b");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.exit_code, b.exit_code);
}

TEST(Cli, KnobsDoNotChangeVerdicts) {
  for (const std::string knobs : {"--branch-bound 2", "--branch-bound 5", "--window 3"}) {
    const std::string json = tmp_path("cli_knobs.json");
    auto r = run_cli("check \"" + source_path("scenarios/paper_cp7.json") + "\" " + knobs + " --json \"" + json + "\"",
                     "cli_knobs");
    EXPECT_EQ(r.exit_code, 10) << knobs << ": " << r.err;
    auto doc = nlohmann::json::parse(read_file(json));
    EXPECT_EQ(doc["claims"][0]["verdict"], "INFEASIBLE") << knobs;
    EXPECT_EQ(doc["claims"][1]["verdict"], "NOT OBSTRUCTED") << knobs;
  }
}

TEST(Cli, AllNotObstructedExitsZero) {
  auto r = run_cli("check \"" + source_path("tests/data/symmetric_ends.json") + "\"", "cli_symmetric");
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("NOT OBSTRUCTED"), std::string::npos);
}

TEST(Cli, NegativeFixturesNameTheHypothesis) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"neg_probe_maslov.json", "N_K > 3"},
      {"neg_grading_odd.json", "evenness"},
      {"neg_common_divisor.json", "common divisor"},
  };
  for (const auto& [file, hypothesis] : cases) {
    auto r = run_cli("check \"" + source_path("tests/data/" + file) + "\"", "cli_neg");
    EXPECT_EQ(r.exit_code, 1) << file;
    EXPECT_NE(r.err.find("hypothesis '" + hypothesis + "'"), std::string::npos) << file << ": " << r.err;
    EXPECT_TRUE(r.out.empty()) << file;
  }
}

TEST(Cli, UsageAndIoErrors) {
  EXPECT_EQ(run_cli("check /nonexistent/scenario.json", "cli_missing").exit_code, 1);
  EXPECT_EQ(run_cli("check", "cli_noarg").exit_code, 1);
  EXPECT_EQ(run_cli("check \"" + source_path("scenarios/paper_cp7.json") + "\" --branch-bound 0", "cli_badbound")
                .exit_code,
            1);
  EXPECT_EQ(run_cli("frobnicate", "cli_badcmd").exit_code, 1);
  EXPECT_EQ(run_cli("--help", "cli_help").exit_code, 0);
}
