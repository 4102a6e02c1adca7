#include <gtest/gtest.h>

#include <algorithm>

#include "cobstruct/exactness.hpp"
#include "support.hpp"

using namespace cobstruct;
using namespace testsupport;

namespace {

FgAbGroup E(std::size_t k) { return FgAbGroup::elementary_two(k); }

ExactSequence seq(const std::string& name, std::vector<SequenceTerm> terms) { return {name, std::move(terms)}; }

SequenceTerm K(std::size_t k) { return SequenceTerm::known(E(k)); }
SequenceTerm X() { return SequenceTerm::unknown("X"); }

void expect_verified(const ExactSequenceProblem& p, const FeasibilityVerdict& v) {
  if (v.feasible) {
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_TRUE(verify_witness(p, *v.witness)) << render_witness(p, *v.witness);
  } else {
    ASSERT_TRUE(v.certificate.has_value());
    EXPECT_TRUE(verify_certificate(p, *v.certificate));
  }
}

LagrangianDescriptor lag(const std::string& name, std::optional<long long> maslov) {
  LagrangianDescriptor l;
  l.name = name;
  l.ambient_dim = 7;
  l.maslov = maslov;
  return l;
}

std::map<std::string, LagrangianDescriptor> paper_lagrangians() {
  return {{"L1", lag("L1", 4)}, {"L2", lag("L2", 8)}, {"L", lag("L", std::nullopt)}};
}

CobordismClaim claim(const std::string& a, const std::string& b) { return {"L", a, b, true, true, std::nullopt}; }

/// The two options for HF(L2, L1) over deg T = -2, with HF(L2, L2) = (0, (Z/2)^4).
std::vector<FloerBranchCase> paper_branches() {
  const ProbeFloerGroups self{E(0), E(4)};
  return {
      {"HF(L2,L1) = (0, 0)", {{"L1", {E(0), E(0)}}, {"L2", self}}},
      {"HF(L2,L1) = ((Z/2)^2, (Z/2)^2)", {{"L1", {E(2), E(2)}}, {"L2", self}}},
  };
}

}  // namespace

// ---------------------------------------------------------------------------
// check_feasibility examples

TEST(Feasibility, UnknownBetweenZeros) {
  ExactSequenceProblem p;
  p.sequences = {seq("A", {K(0), X(), K(0)})};
  auto v = check_feasibility(p);
  ASSERT_TRUE(v.feasible);
  EXPECT_EQ(v.witness->unknown_dims.at("X"), 0);
  expect_verified(p, v);

  p.sequences.push_back(seq("B", {K(0), K(4), X(), K(0)}));
  auto w = check_feasibility(p);
  EXPECT_FALSE(w.feasible);
  expect_verified(p, w);
}

TEST(Feasibility, SecondCaseOfTheProductIntersection) {
  ExactSequenceProblem p;
  p.sequences = {seq("A", {K(4), K(2), X(), K(0), K(2)}), seq("B", {K(2), K(4), X(), K(2), K(0)})};
  auto v = check_feasibility(p);
  ASSERT_FALSE(v.feasible);
  expect_verified(p, v);
  const auto lines = render_certificate(p, *v.certificate, "  ");
  ASSERT_FALSE(lines.empty());
  bool mentions_x = false;
  for (const auto& l : lines) mentions_x = mentions_x || l.find("X") != std::string::npos;
  EXPECT_TRUE(mentions_x);
}

TEST(Feasibility, IsomorphismBetweenZeros) {
  ExactSequenceProblem p;
  p.sequences = {seq("A", {K(0), K(1), K(1), K(0)})};
  auto v = check_feasibility(p);
  ASSERT_TRUE(v.feasible);
  EXPECT_EQ(v.witness->ranks[0], (std::vector<long long>{0, 1, 0}));
  expect_verified(p, v);
}

TEST(Feasibility, KnownContradictionWithoutUnknowns) {
  ExactSequenceProblem p;
  p.sequences = {seq("A", {K(0), K(1), K(0)})};
  auto v = check_feasibility(p);
  EXPECT_FALSE(v.feasible);
  expect_verified(p, v);
}

TEST(Feasibility, UnsupportedTermsRejected) {
  ExactSequenceProblem p;
  p.sequences = {seq("A", {SequenceTerm::known(FgAbGroup::cyclic(4)), X(), K(0)})};
  EXPECT_THROW(check_feasibility(p), UnsupportedProblemError);
  p.sequences = {seq("A", {SequenceTerm::known(FgAbGroup::free(1)), X(), K(0)})};
  EXPECT_THROW(check_feasibility(p), UnsupportedProblemError);
  p.sequences = {seq("A", {K(1), X(), K(0)})};
  p.elementary_two = false;
  EXPECT_THROW(check_feasibility(p), UnsupportedProblemError);
}

TEST(Feasibility, WitnessVerificationRejectsBadWitness) {
  ExactSequenceProblem p;
  p.sequences = {seq("A", {K(0), K(2), X(), K(0)})};
  auto v = check_feasibility(p);
  ASSERT_TRUE(v.feasible);
  FeasibilityWitness bad = *v.witness;
  bad.unknown_dims["X"] = 1;
  EXPECT_FALSE(verify_witness(p, bad));
}

TEST(Feasibility, CertificateVerificationRejectsTampering) {
  ExactSequenceProblem p;
  p.sequences = {seq("A", {K(0), X(), K(0)}), seq("B", {K(0), K(4), X(), K(0)})};
  auto v = check_feasibility(p);
  ASSERT_FALSE(v.feasible);
  ASSERT_TRUE(verify_certificate(p, *v.certificate));
  Certificate tampered = *v.certificate;
  ASSERT_FALSE(tampered.steps.empty());
  tampered.steps.back().value += 5;
  EXPECT_FALSE(verify_certificate(p, tampered));
  ExactSequenceProblem other;
  other.sequences = {seq("A", {K(0), X(), K(0)})};
  EXPECT_FALSE(verify_certificate(other, *v.certificate));
}

TEST(Feasibility, PropertyAgreesWithBruteForce) {
  std::mt19937 rng(160913);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    ExactSequenceProblem p = random_problem(rng);
    auto v = check_feasibility(p);
    ASSERT_EQ(v.feasible, brute_force_feasible(p, 3)) << "trial " << trial;
    if (v.feasible) {
      ++feasible;
      ASSERT_TRUE(verify_witness(p, *v.witness));
    } else {
      ++infeasible;
      ASSERT_TRUE(verify_certificate(p, *v.certificate));
    }
  }
  // both outcomes are exercised
  EXPECT_GT(feasible, 20);
  EXPECT_GT(infeasible, 20);
}

TEST(Feasibility, PropertyOrderInvariance) {
  std::mt19937 rng(271828);
  int checked = 0;
  while (checked < 120) {
    ExactSequenceProblem p = random_problem(rng);
    if (p.sequences.size() < 2) continue;
    ExactSequenceProblem q = p;
    std::reverse(q.sequences.begin(), q.sequences.end());
    ASSERT_EQ(check_feasibility(p).feasible, check_feasibility(q).feasible);
    ++checked;
  }
}

TEST(Feasibility, Deterministic) {
  ExactSequenceProblem p;
  p.sequences = {seq("A", {K(4), K(2), X(), K(0), K(2)}), seq("B", {K(2), K(4), X(), K(2), K(0)})};
  EXPECT_EQ(render_certificate(p, *check_feasibility(p).certificate, ""),
            render_certificate(p, *check_feasibility(p).certificate, ""));
}

// ---------------------------------------------------------------------------
// cobordism sequences

TEST(CobordismSequence, FirstOrder) {
  auto lags = paper_lagrangians();
  auto branch = paper_branches()[0];
  ExactSequence s = build_cobordism_sequence(lags.at("L2"), claim("L1", "L2"), branch.floer, lags, LaurentGrading(-2));
  ASSERT_EQ(s.terms.size(), 5u);
  EXPECT_EQ(s.terms[0].group, E(4));
  EXPECT_EQ(s.terms[0].label, "HF_1(L2,L2)");
  EXPECT_EQ(s.terms[1].group, E(0));
  EXPECT_EQ(s.terms[1].label, "HF_1(L2,L1)");
  EXPECT_FALSE(s.terms[2].is_known());
  EXPECT_EQ(s.terms[2].variable, "HF_1(L2,L)");
  EXPECT_EQ(s.terms[3].group, E(0));
  EXPECT_EQ(s.terms[4].group, E(0));
}

TEST(CobordismSequence, SwappedOrder) {
  auto lags = paper_lagrangians();
  auto branch = paper_branches()[0];
  ExactSequence s = build_cobordism_sequence(lags.at("L2"), claim("L2", "L1"), branch.floer, lags, LaurentGrading(-2));
  EXPECT_EQ(s.terms[0].label, "HF_1(L2,L1)");
  EXPECT_EQ(s.terms[1].label, "HF_1(L2,L2)");
  EXPECT_EQ(s.terms[1].group, E(4));
  EXPECT_EQ(s.terms[3].label, "HF_0(L2,L1)");
  EXPECT_EQ(s.terms[4].label, "HF_0(L2,L2)");
}

TEST(CobordismSequence, SharedUnknownAcrossClaims) {
  auto lags = paper_lagrangians();
  auto p = build_cobordism_sequences(lags.at("L2"), {claim("L1", "L2"), claim("L2", "L1")}, paper_branches()[0].floer,
                                     lags, LaurentGrading(-2));
  ASSERT_EQ(p.sequences.size(), 2u);
  EXPECT_EQ(p.sequences[0].terms[2].variable, p.sequences[1].terms[2].variable);
}

TEST(CobordismSequence, MissingFloerData) {
  auto lags = paper_lagrangians();
  ProbeFloerTable partial{{"L1", {E(0), E(0)}}};
  EXPECT_THROW(build_cobordism_sequence(lags.at("L2"), claim("L1", "L2"), partial, lags, LaurentGrading(-2)),
               ValidationError);
}

namespace {

std::string violated(const LagrangianDescriptor& probe, const CobordismClaim& c,
                     const std::map<std::string, LagrangianDescriptor>& lags, long long grading) {
  try {
    check_cobordism_admissibility(probe, c, lags, LaurentGrading(grading));
  } catch (const AdmissibilityError& e) {
    return e.hypothesis();
  }
  return {};
}

}  // namespace

TEST(Admissibility, NamedHypotheses) {
  auto lags = paper_lagrangians();
  EXPECT_EQ(violated(lags.at("L2"), claim("L1", "L2"), lags, -2), "");

  auto small_probe = lags;
  small_probe["K"] = lag("K", 2);
  EXPECT_EQ(violated(small_probe.at("K"), claim("L1", "L2"), small_probe, -2), "N_K > 3");

  auto not_spin = claim("L1", "L2");
  not_spin.spin = false;
  EXPECT_EQ(violated(lags.at("L2"), not_spin, lags, -2), "spin monotone cobordism");

  auto nonmonotone = lags;
  nonmonotone["L1"].monotone = false;
  EXPECT_EQ(violated(nonmonotone.at("L2"), claim("L1", "L2"), nonmonotone, -2), "monotone spin Lagrangians");

  auto other_ambient = lags;
  other_ambient["L1"].ambient_dim = 5;
  EXPECT_EQ(violated(other_ambient.at("L2"), claim("L1", "L2"), other_ambient, -2), "equal monotonicity constants");

  EXPECT_EQ(violated(lags.at("L2"), claim("L1", "L2"), lags, -8), "common divisor");
  // N_{L2,L1} = 4 is divisible by 4, but the surgery's Maslov number is unknown
  EXPECT_EQ(violated(lags.at("L2"), claim("L1", "L2"), lags, -4), "common divisor");
}

TEST(Admissibility, ErrorCarriesDetail) {
  auto lags = paper_lagrangians();
  lags["K"] = lag("K", 2);
  try {
    check_cobordism_admissibility(lags.at("K"), claim("L1", "L2"), lags, LaurentGrading(-2));
    FAIL() << "expected an admissibility error";
  } catch (const AdmissibilityError& e) {
    EXPECT_NE(e.detail().find("2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("N_K > 3"), std::string::npos);
  }
}

// ---------------------------------------------------------------------------
// certify_nonexistence

TEST(CertifyNonexistence, SwappedOrderIsInfeasible) {
  auto lags = paper_lagrangians();
  ClaimReport r = certify_nonexistence(claim("L2", "L1"), {claim("L1", "L2")}, paper_branches(), lags.at("L2"), lags,
                                       LaurentGrading(-2));
  EXPECT_TRUE(r.infeasible);
  ASSERT_EQ(r.branches.size(), 2u);
  for (const auto& b : r.branches) {
    EXPECT_FALSE(b.verdict.feasible);
    ASSERT_TRUE(b.verdict.certificate.has_value());
    EXPECT_TRUE(verify_certificate(b.problem, *b.verdict.certificate));
  }
}

TEST(CertifyNonexistence, ConstructedOrderIsNotObstructed) {
  auto lags = paper_lagrangians();
  ClaimReport r = certify_nonexistence(claim("L1", "L2"), {claim("L1", "L2")}, paper_branches(), lags.at("L2"), lags,
                                       LaurentGrading(-2));
  EXPECT_FALSE(r.infeasible);
  EXPECT_TRUE(r.assumed.empty());  // the claim itself is not assumed twice
  ASSERT_EQ(r.branches.size(), 2u);
  for (const auto& b : r.branches) {
    ASSERT_TRUE(b.verdict.feasible);
    EXPECT_TRUE(verify_witness(b.problem, *b.verdict.witness));
  }
}

TEST(CertifyNonexistence, EmptyBranchSetAsksForLargerBound) {
  auto lags = paper_lagrangians();
  try {
    certify_nonexistence(claim("L2", "L1"), {}, {}, lags.at("L2"), lags, LaurentGrading(-2));
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("raise the branch bound"), std::string::npos);
  }
}
