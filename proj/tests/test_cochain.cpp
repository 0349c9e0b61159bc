#include <gtest/gtest.h>

#include "massey/check.hpp"
#include "massey/cochain.hpp"
#include "oracle.hpp"

using namespace massey;

namespace {

Word W(const char* s) { return Word::parse(s, 2); }
std::string S(const Word& w) { return w.empty() ? std::string{} : w.to_string(); }

QuasiMorphism brooks(const char* w) { return QuasiMorphism(DecompositionSpec::brooks(W(w)), LambdaTable({{W(w), 1}})); }

CochainExpr phi() { return CochainExpr::qm(brooks("ab")); }
CochainExpr psi() { return CochainExpr::qm(brooks("aB")); }
CochainExpr omega() { return restrict_aligned(coboundary(CochainExpr::qm(brooks("ba")))); }

// Arbitrary (not necessarily aligned) tuple.
Tuple any_tuple(Rng& rng, int arity, std::size_t max_len) {
  Tuple t;
  for (int i = 0; i < arity; ++i) t.push_back(sample_word(2, uniform_below(rng, max_len + 1), rng));
  return t;
}

// Pointwise equality on the capped exhaustive domain plus `samples` random
// aligned tuples; returns the stage record so failures print a counterexample.
StageRecord same(const CochainExpr& a, const CochainExpr& b, std::size_t samples = 10000, int radius = 3) {
  TupleDomain d;
  d.exhaustive = AlignedDomain{2, a.degree(), radius, std::max(a.degree() + 1, 12 - a.degree())};
  d.random_count = samples;
  d.max_len = 25;
  d.seed = 1;
  return check_pointwise("same", d, [&](std::span<const Word> t, EvalContext& ctx) {
    return expect_equal(evaluate(a, t, ctx), evaluate(b, t, ctx));
  });
}

std::string why(const StageRecord& r) { return r.counterexample ? r.counterexample->dump() : std::string{}; }

}  // namespace

TEST(Aligned, WorkedExamples) {
  EXPECT_TRUE(is_aligned(Tuple{W("a"), W("b")}));
  EXPECT_FALSE(is_aligned(Tuple{W("a"), W("Ab")}));
  EXPECT_FALSE(is_aligned(Tuple{W("a"), Word(2)}));
  EXPECT_TRUE(is_aligned(Tuple{}));
}

TEST(AlignedDomain, CountMatchesEnumerationAndBruteForce) {
  for (int arity = 1; arity <= 3; ++arity)
    for (int radius = 1; radius <= 3; ++radius)
      for (int total : {-1, arity + 1, 2 * radius}) {
        const AlignedDomain d{2, arity, radius, total};
        std::uint64_t n = 0;
        for_each_aligned_tuple(d, kDefaultEnumerationCap, [&](std::span<const Word> t) {
          ASSERT_TRUE(is_aligned(t));
          ++n;
        });
        EXPECT_EQ(n, count_aligned_tuples(d));
        // brute force over all tuples of ball words
        const auto ball = oracle::ball(2, radius);
        std::vector<std::string> words(ball.begin(), ball.end());
        std::uint64_t brute = 0;
        std::vector<std::size_t> idx(static_cast<std::size_t>(arity), 0);
        while (true) {
          oracle::StrTuple t;
          std::size_t letters = 0;
          for (std::size_t i : idx) {
            t.push_back(words[i]);
            letters += words[i].size();
          }
          if (oracle::aligned(t) && (total < 0 || static_cast<int>(letters) <= total)) ++brute;
          std::size_t p = 0;
          while (p < idx.size() && ++idx[p] == words.size()) idx[p++] = 0;
          if (p == idx.size()) break;
        }
        EXPECT_EQ(n, brute) << arity << " " << radius << " " << total;
      }
}

TEST(Eval, WorkedExamples) {
  const auto d = coboundary(phi());
  EXPECT_EQ(evaluate(d, {W("a"), W("b")}), Rational(-1));
  EXPECT_EQ(evaluate(cup(CochainExpr::constant(3), CochainExpr::constant(Rational(1, 2))), std::span<const Word>{}), Rational(3, 2));
  EXPECT_THROW(evaluate(d, {W("a")}), UsageError);
  EXPECT_EQ(evaluate(coboundary(CochainExpr::constant(5)), {W("ab")}), Rational(0));
}

TEST(Eval, CoboundaryOfQmIsTheDefectFormula) {
  const auto q = brooks("ab");
  const auto d = coboundary(CochainExpr::qm(q));
  Rng rng(2);
  for (int i = 0; i < 2000; ++i) {
    const Tuple t = any_tuple(rng, 2, 12);
    ASSERT_EQ(evaluate(d, t), q(t[1]) - q(multiply(t[0], t[1])) + q(t[0]));
  }
}

TEST(Eval, CoboundaryMatchesStringOracle) {
  const oracle::Qm oq = oracle::brooks("ba", 1);
  const oracle::Cochain ow = oracle::restricted_delta(oq);
  const oracle::Cochain odw = oracle::coboundary(ow);
  const auto e = coboundary(omega());
  Rng rng(3);
  for (int i = 0; i < 3000; ++i) {
    const Tuple t = i % 2 ? any_tuple(rng, 3, 6) : sample_aligned_tuple(rng, 2, 3, 10);
    oracle::StrTuple st;
    for (const Word& w : t) st.push_back(S(w));
    ASSERT_EQ(evaluate(omega(), std::span<const Word>(t).first(2)), ow({st[0], st[1]}));
    ASSERT_EQ(evaluate(e, t), odw(st));
  }
}

TEST(Eval, ExtensionByZeroCounters) {
  const auto t = CochainExpr::table(2, {{Tuple{W("a"), W("b")}, Rational(4)}});
  EvalContext ctx;
  EXPECT_EQ(evaluate(t, Tuple{W("a"), W("b")}, ctx), Rational(4));
  EXPECT_EQ(evaluate(t, Tuple{W("a"), W("Ab")}, ctx), Rational(0));
  EXPECT_EQ(evaluate(t, Tuple{W("a"), Word(2)}, ctx), Rational(0));
  EXPECT_EQ(ctx.misaligned_zeros, 1u);
  EXPECT_EQ(ctx.identity_zeros, 1u);
  EXPECT_THROW(CochainExpr::table(2, {{Tuple{W("a")}, Rational(1)}}), ConfigError);
}

TEST(Eval, FacesOfAlignedTuplesStayAligned) {
  const auto e = coboundary(coboundary(cup(omega(), restrict_aligned(coboundary(psi())))));
  Rng rng(4);
  EvalContext ctx;
  for (int i = 0; i < 500; ++i) evaluate(e, sample_aligned_tuple(rng, 2, 6, 8), ctx);
  EXPECT_EQ(ctx.misaligned_zeros, 0u);
}

TEST(Complex, CoboundarySquaredVanishesEverywhere) {
  const std::vector<CochainExpr> exprs{phi(), cup(phi(), psi()), omega(), cup(omega(), phi()),
                                       alternate(cup(psi(), phi()))};
  Rng rng(5);
  for (const auto& e : exprs) {
    const auto dd = coboundary(coboundary(e));
    for (int i = 0; i < 300; ++i) ASSERT_EQ(evaluate(dd, any_tuple(rng, dd.degree(), 8)), Rational(0));
    const auto r = same(dd, CochainExpr::table(dd.degree(), {}), 2000, 2);
    EXPECT_TRUE(r.passed) << why(r);
  }
}

TEST(Complex, CupUnitAndDegrees) {
  const auto one = CochainExpr::constant(1);
  EXPECT_EQ(cup(one, phi()).degree(), 1);
  EXPECT_EQ(coboundary(cup(omega(), phi())).degree(), 4);
  const auto r = same(cup(one, cup(omega(), one)), omega());
  EXPECT_TRUE(r.passed) << why(r);
}

TEST(Complex, Leibniz) {
  const std::vector<std::pair<CochainExpr, CochainExpr>> pairs{
      {phi(), psi()}, {omega(), phi()}, {phi(), omega()}, {cup(phi(), psi()), omega()}};
  for (const auto& [a, b] : pairs) {
    const Rational s = a.degree() % 2 == 0 ? Rational(1) : Rational(-1);
    const auto lhs = coboundary(cup(a, b));
    const auto rhs = lincomb({{1, cup(coboundary(a), b)}, {s, cup(a, coboundary(b))}});
    const auto r = same(lhs, rhs, 10000);
    EXPECT_TRUE(r.passed) << why(r);
  }
}

TEST(Complex, AlternationIsAnIdempotentChainMap) {
  for (const auto& e : {cup(phi(), psi()), omega(), cup(omega(), phi()), phi()}) {
    const auto idem = same(alternate(alternate(e)), alternate(e));
    EXPECT_TRUE(idem.passed) << why(idem);
    const auto chain = same(alternate(coboundary(e)), coboundary(alternate(e)));
    EXPECT_TRUE(chain.passed) << why(chain);
  }
}

TEST(Complex, AlternationFormulaAndIdentity) {
  const auto e = cup(phi(), psi());
  const auto a = alternate(e);
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const Tuple t = sample_aligned_tuple(rng, 2, 2, 10);
    const Tuple flipped{invert(t[1]), invert(t[0])};
    ASSERT_EQ(evaluate(a, t), (evaluate(e, t) - evaluate(e, flipped)) / 2);
    ASSERT_EQ(evaluate(a, t), -evaluate(a, flipped));
  }
  EXPECT_EQ(detail::alternation_sign(1), -1);
  EXPECT_EQ(detail::alternation_sign(2), -1);
  EXPECT_EQ(detail::alternation_sign(3), 1);
  EXPECT_EQ(detail::alternation_sign(4), 1);
  EXPECT_EQ(detail::alternation_sign(5), -1);
}

TEST(SupNorm, WorkedExamples) {
  SupPlan p;
  p.exhaustive = AlignedDomain{2, 0, 3, 6};
  p.random_count = 100;
  EXPECT_EQ(sup_norm_estimate(CochainExpr::constant(Rational(-5, 2)), p).max_abs, Rational(5, 2));
  const auto hom = CochainExpr::qm(QuasiMorphism(DecompositionSpec::letter(2), LambdaTable({{W("a"), 1}})));
  EXPECT_EQ(sup_norm_estimate(coboundary(hom), p).max_abs, Rational(0));
}

TEST(SupNorm, BrooksCoboundaryStabilizes) {
  std::vector<Rational> sups;
  for (std::size_t len : {25u, 50u, 100u, 200u}) {
    SupPlan p;
    p.exhaustive = AlignedDomain{2, 2, 3, 6};
    p.random_count = 2000;
    p.max_len = len;
    p.seed = 8;
    const SupStats s = sup_norm_estimate(coboundary(phi()), p);
    sups.push_back(s.max_abs);
    std::uint64_t total = 0;
    for (const auto& [v, n] : s.histogram) total += n;
    EXPECT_EQ(total, s.count);
  }
  for (const Rational& s : sups) EXPECT_EQ(s, Rational(1));
}

TEST(SupNorm, Deterministic) {
  SupPlan p;
  p.exhaustive = AlignedDomain{2, 2, 2, 4};
  p.random_count = 500;
  p.seed = 123;
  const auto a = sup_norm_estimate(cup(phi(), psi()), p);
  const auto b = sup_norm_estimate(cup(phi(), psi()), p);
  EXPECT_EQ(a.max_abs, b.max_abs);
  EXPECT_EQ(a.argmax, b.argmax);
  EXPECT_EQ(a.histogram, b.histogram);
}

TEST(Check, ParallelRunsReportTheSameCounterexample) {
  // deliberately false identity: phi u psi == psi u phi
  const auto a = cup(phi(), psi()), b = cup(psi(), phi());
  TupleDomain d;
  d.exhaustive = AlignedDomain{2, 2, 3, 6};
  d.random_count = 3000;
  d.seed = 9;
  auto run = [&](int jobs) {
    return check_pointwise("swap", d, [&](std::span<const Word> t, EvalContext& ctx) {
      return expect_equal(evaluate(a, t, ctx), evaluate(b, t, ctx));
    }, jobs);
  };
  const auto one = run(1), four = run(4);
  EXPECT_FALSE(one.passed);
  EXPECT_EQ(one.violations, four.violations);
  EXPECT_EQ(*one.counterexample, *four.counterexample);
  EXPECT_EQ(one.checked, count_aligned_tuples(d.exhaustive) + 3000);
}
