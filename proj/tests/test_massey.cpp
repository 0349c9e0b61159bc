#include <gtest/gtest.h>

#include "massey/massey.hpp"
#include "oracle.hpp"

using namespace massey;

namespace {

Word W(const char* s) { return Word::parse(s, 2); }
std::string S(const Word& w) { return w.empty() ? std::string{} : w.to_string(); }
oracle::StrTuple ST(std::span<const Word> t) {
  oracle::StrTuple out;
  for (const Word& w : t) out.push_back(S(w));
  return out;
}

QuasiMorphism brooks(const char* w, Rational v = 1) {
  return QuasiMorphism(DecompositionSpec::brooks(W(w)), LambdaTable({{W(w), v}}));
}

CochainExpr delta_qm(const QuasiMorphism& q) { return coboundary(CochainExpr::qm(q)); }

MasseyInstance standard() { return MasseyInstance(brooks("ab"), delta_qm(brooks("aB")), delta_qm(brooks("ba")), 2, 2); }

struct OracleInstance {
  oracle::Qm phi = oracle::brooks("ab", 1);
  oracle::Cochain w1 = oracle::restricted_delta(oracle::brooks("aB", 1));
  oracle::Cochain w2 = oracle::restricted_delta(oracle::brooks("ba", 1));
};

// 1 on every nontrivial word
class Ones final : public CustomCochain {
 public:
  int degree() const override { return 1; }
  std::string name() const override { return "ones"; }
  Rational evaluate(std::span<const Word> t, EvalContext&) const override { return t[0].empty() ? Rational{} : Rational{1}; }
};

MasseyInstance letter_ones() {
  const QuasiMorphism phi(DecompositionSpec::letter(2), LambdaTable({{W("a"), 1}}));
  const auto ones = CochainExpr::custom(std::make_shared<Ones>());
  return MasseyInstance(phi, ones, ones);
}

ExperimentPlan small_plan() {
  ExperimentPlan p = default_massey_plan();
  p.exhaustive_radius = 3;
  p.total_length_by_arity = {{3, 6}, {4, 6}, {5, 6}, {6, 7}};
  p.default_samples = 300;
  p.random_max_len = 20;
  p.sample_counts["representative-cocycle"] = 50;
  p.max_len_ladder = {10, 20, 40};
  p.ladder_samples = 100;
  p.pair_radius = 4;
  p.seed = 31;
  return p;
}

const StageRecord& stage(const VerificationReport& r, const std::string& name) {
  const StageRecord* s = r.find(name);
  if (s == nullptr) throw std::runtime_error("missing stage " + name);
  return *s;
}

}  // namespace

TEST(Instance, Validation) {
  EXPECT_THROW(MasseyInstance(brooks("ab"), delta_qm(brooks("aB")), delta_qm(brooks("ba")), 1, 2), ConfigError);
  EXPECT_THROW(MasseyInstance(brooks("ab"), CochainExpr::constant(1), delta_qm(brooks("ba"))), ConfigError);
  const auto m = standard();
  EXPECT_EQ(m.k1(), 2);
  EXPECT_EQ(m.omega1().kind(), CochainExpr::Kind::Restrict);
}

TEST(Eta, HandExamplesOnLetterSpec) {
  const auto m = letter_ones();
  const auto e1 = eta1(m), e2 = eta2(m);
  // omega1(1) phi(a) + omega1(a) phi(b) = 0 + 0
  EXPECT_EQ(evaluate(e1, {W("ab")}), Rational(0));
  // omega1(1) phi(b) + omega1(b) phi(a) = 0 + 1
  EXPECT_EQ(evaluate(e1, {W("ba")}), Rational(1));
  // phi(a) omega2(b) + phi(b) omega2(1) = 1 + 0
  EXPECT_EQ(evaluate(e2, {W("ab")}), Rational(1));
  EXPECT_EQ(evaluate(e2, {W("a")}), Rational(0));
  EXPECT_EQ(evaluate(e1, {W("a")}), Rational(0));
  EXPECT_EQ(evaluate(e1, {Word(2)}), Rational(0));
  EXPECT_EQ(evaluate(e2, {Word(2)}), Rational(0));
}

TEST(Eta, SinglePieceMiddleEntryVanishes) {
  const auto e = eta_bridge(standard());
  EXPECT_EQ(e.degree(), 3);
  EXPECT_EQ(evaluate(e, {W("a"), W("ab"), W("a")}), Rational(0));
  EXPECT_EQ(evaluate(e, {W("b"), W("a"), W("b")}), Rational(0));
}

TEST(Eta, MatchesDirectFormulaOracle) {
  const auto m = standard();
  const auto c = build_construction(m);
  const OracleInstance o;
  Rng rng(41);
  for (int i = 0; i < 400; ++i) {
    const Tuple t2 = sample_aligned_tuple(rng, 2, 2, 12);
    const Tuple t3 = sample_aligned_tuple(rng, 2, 3, 12);
    const Tuple t4 = sample_aligned_tuple(rng, 2, 4, 8);
    ASSERT_EQ(evaluate(c.eta1, t2), oracle::eta1(o.w1, o.phi, ST(t2)));
    ASSERT_EQ(evaluate(c.eta2, t2), oracle::eta2(o.w2, o.phi, ST(t2)));
    ASSERT_EQ(evaluate(c.eta, t3), oracle::eta(o.w1, 2, o.w2, o.phi, ST(t3)));
    ASSERT_EQ(evaluate(c.primitive, t4), oracle::primitive(o.w1, 2, o.w2, o.phi, ST(t4)));
  }
}

// Value computed by the string oracle and frozen.
TEST(Eta, FrozenValueAtFixedTriple) {
  const Tuple t{W("Abbb"), W("ABAb"), W("abA")};
  const OracleInstance o;
  const Rational expected = oracle::eta(o.w1, 2, o.w2, o.phi, ST(t));
  EXPECT_EQ(evaluate(eta_bridge(standard()), t), expected);
  EXPECT_EQ(expected, Rational(1));
}

TEST(Construction, ZeroLambdaGivesZeroEverything) {
  const MasseyInstance m(QuasiMorphism(DecompositionSpec::brooks(W("ab")), LambdaTable{}), delta_qm(brooks("aB")),
                         delta_qm(brooks("ba")));
  const auto c = build_construction(m);
  Rng rng(43);
  for (int i = 0; i < 200; ++i) {
    for (const auto* e : {&c.eta1, &c.eta2, &c.beta1, &c.beta2, &c.eta, &c.mu, &c.primitive}) {
      const Tuple t = sample_aligned_tuple(rng, 2, e->degree(), 10);
      ASSERT_EQ(evaluate(*e, t), Rational(0));
    }
  }
}

TEST(Construction, Degrees) {
  const auto c = build_construction(standard());
  EXPECT_EQ(c.beta1.degree(), 3);
  EXPECT_EQ(c.beta2.degree(), 3);
  EXPECT_EQ(c.mu.degree(), 5);
  EXPECT_EQ(c.primitive.degree(), 4);
  EXPECT_EQ(c.eta.degree(), 3);
}

TEST(ThreeSum, EqualsPrimitiveAndLedgerHolds) {
  const auto m = standard();
  const auto P = bounded_primitive(m);
  for_each_aligned_tuple(AlignedDomain{2, 4, 3, 7}, kDefaultEnumerationCap, [&](std::span<const Word> t) {
    const ThreeSum s = three_sum_residual(m, t);
    ASSERT_EQ(s.value, evaluate(P, t)) << tuple_to_string(t);
    const auto& L = s.ledger;
    ASSERT_TRUE(L.triangle.c2.empty());
    ASSERT_EQ(L.mismatched_pairs, 0u);
    ASSERT_EQ(L.surviving_sum, s.value);
    ASSERT_LE(L.surviving_terms.size(), L.bound);
    ASSERT_LE(L.bound, 3u);  // 3 * R-hat with R-hat = 1
    ASSERT_EQ(L.canceled_c1, L.triangle.corner_lengths[0]);
    ASSERT_EQ(L.canceled_c3, L.triangle.corner_lengths[2]);
  });
}

TEST(ThreeSum, LetterSpecCancelsCompletely) {
  const QuasiMorphism phi(DecompositionSpec::letter(2), LambdaTable({{W("a"), 1}, {W("b"), -2}}));
  const MasseyInstance m(phi, delta_qm(brooks("aB")), delta_qm(brooks("ba")));
  for_each_aligned_tuple(AlignedDomain{2, 4, 3, 7}, kDefaultEnumerationCap, [&](std::span<const Word> t) {
    const ThreeSum s = three_sum_residual(m, t);
    ASSERT_EQ(s.value, Rational(0));
    ASSERT_TRUE(s.ledger.surviving_terms.empty());
  });
}

TEST(ThreeSum, Errors) {
  const auto m = standard();
  EXPECT_THROW(three_sum_residual(m, Tuple{W("a"), W("A"), W("b"), W("b")}), UsageError);
  EXPECT_THROW(three_sum_residual(m, Tuple{W("a"), W("b")}), UsageError);
}

TEST(Verify, StandardInstancePasses) {
  const VerificationReport r = verify_massey_triviality(standard(), small_plan());
  for (const auto& s : r.stages) EXPECT_TRUE(s.passed) << s.name << " " << (s.counterexample ? s.counterexample->dump() : "");
  EXPECT_EQ(r.measured["r_hat"], 1);
  EXPECT_EQ(r.measured["omega1_sup"]["max_abs"], "1/1");
  EXPECT_EQ(r.measured["omega2_sup"]["max_abs"], "1/1");
  EXPECT_EQ(r.measured["assembled_bound"], "3/1");
  for (const auto& rung : stage(r, "sup-plateau").stats["rungs"]) EXPECT_EQ(rung["sup"], "1/1");
  EXPECT_EQ(r.config["convention_dependent"], false);
}

TEST(Verify, MutationsAreCaught) {
  const auto m = standard();
  const auto plan = small_plan();
  {
    const auto r = verify_massey_triviality(m, plan, Mutation::FlipEtaSign);
    EXPECT_FALSE(r.passed());
    EXPECT_FALSE(stage(r, "three-sum").passed);
    EXPECT_TRUE(stage(r, "three-sum").counterexample.has_value());
    // delta P = mu cannot see eta's sign: delta delta eta = 0
    EXPECT_TRUE(stage(r, "bounded-primitive").passed);
  }
  {
    const auto r = verify_massey_triviality(m, plan, Mutation::InclusiveZ);
    EXPECT_FALSE(stage(r, "three-sum").passed);
  }
  {
    const auto r = verify_massey_triviality(m, plan, Mutation::PerturbLambda, VerifyScope::PrimitivesOnly);
    EXPECT_FALSE(stage(r, "primitive-beta1").passed);
    EXPECT_FALSE(stage(r, "primitive-beta2").passed);
    EXPECT_EQ(r.stages.size(), 4u);
  }
}

TEST(Verify, DegreeOneInstanceIsFlagged) {
  // exponent sum of a is an (unbounded) aligned cocycle of degree 1
  const auto hom = CochainExpr::qm(QuasiMorphism(DecompositionSpec::letter(2), LambdaTable({{W("a"), 1}})));
  const MasseyInstance m(brooks("ab"), hom, delta_qm(brooks("ba")));
  ExperimentPlan p = small_plan();
  const auto r = verify_massey_triviality(m, p);
  EXPECT_EQ(r.config["convention_dependent"], true);
  for (const char* name : {"cocycle-omega1", "primitive-beta1", "primitive-beta2", "representative-simplification",
                           "bounded-primitive", "three-sum", "cancellation-ledger"})
    EXPECT_TRUE(stage(r, name).passed) << name;
}

TEST(Verify, RankMismatchAndBadPlan) {
  ExperimentPlan p = small_plan();
  p.rank = 3;
  EXPECT_THROW(verify_massey_triviality(standard(), p), ConfigError);
  p = small_plan();
  p.max_len_ladder = {20, 10};
  EXPECT_THROW(verify_massey_triviality(standard(), p), ConfigError);
}
