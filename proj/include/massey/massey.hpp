#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "massey/check.hpp"
#include "massey/cochain.hpp"
#include "massey/decomposition.hpp"
#include "massey/errors.hpp"
#include "massey/plan.hpp"
#include "massey/quasimorphism.hpp"
#include "massey/report.hpp"
#include "massey/tuples.hpp"

namespace massey {

// phi together with two bounded aligned cocycles of degrees k1, k2.
class MasseyInstance {
 public:
  MasseyInstance(QuasiMorphism phi, const CochainExpr& omega1, const CochainExpr& omega2)
      : phi_(std::move(phi)), omega1_(restrict_aligned(omega1)), omega2_(restrict_aligned(omega2)) {
    if (omega1_.degree() < 1 || omega2_.degree() < 1)
      throw ConfigError("massey instance: omega1 and omega2 need degree >= 1");
  }

  // Variant that cross-checks declared degrees against the expressions.
  MasseyInstance(QuasiMorphism phi, const CochainExpr& omega1, const CochainExpr& omega2, int k1, int k2)
      : MasseyInstance(std::move(phi), omega1, omega2) {
    if (k1 != omega1_.degree() || k2 != omega2_.degree())
      throw ConfigError("massey instance: declared k1=" + std::to_string(k1) + ", k2=" + std::to_string(k2) +
                        " but omega degrees are " + std::to_string(omega1_.degree()) + ", " +
                        std::to_string(omega2_.degree()));
  }

  const QuasiMorphism& phi() const { return phi_; }
  const DecompositionSpec& spec() const { return phi_.spec(); }
  const CochainExpr& omega1() const { return omega1_; }
  const CochainExpr& omega2() const { return omega2_; }
  int k1() const { return omega1_.degree(); }
  int k2() const { return omega2_.degree(); }
  int rank() const { return phi_.rank(); }

 private:
  QuasiMorphism phi_;
  CochainExpr omega1_, omega2_;
};

// Deliberate corruptions of the construction, used to show that the checks
// are not vacuous. Targets (omega_i cup delta phi, the three sums) always use
// the unmodified instance.
enum class Mutation { None, FlipEtaSign, InclusiveZ, PerturbLambda };

inline const char* mutation_name(Mutation m) {
  switch (m) {
    case Mutation::None: return "none";
    case Mutation::FlipEtaSign: return "flip-eta-sign";
    case Mutation::InclusiveZ: return "inclusive-z";
    case Mutation::PerturbLambda: return "perturb-lambda";
  }
  return "?";
}

inline Mutation parse_mutation(const std::string& s) {
  for (Mutation m : {Mutation::None, Mutation::FlipEtaSign, Mutation::InclusiveZ, Mutation::PerturbLambda})
    if (s == mutation_name(m)) return m;
  throw ConfigError("unknown mutation '" + s + "'");
}

namespace detail {

// z-products of g around piece j (1-based): z^<_j = g^(1)...g^(j-1) and
// z^>_j = g^(j+1)...g^(N). `inclusive` moves piece j into both, which is the
// boundary convention mutation.
struct ZSplit {
  Word before, piece, after;
};

inline Word z_piece(const Word& g, const PieceBounds& cuts, std::size_t j) {
  return g.subword(cuts[j - 1], cuts[j] - cuts[j - 1]);
}
inline Word z_before(const Word& g, const PieceBounds& cuts, std::size_t j, bool inclusive) {
  return g.prefix(inclusive ? cuts[j] : cuts[j - 1]);
}
inline Word z_after(const Word& g, const PieceBounds& cuts, std::size_t j, bool inclusive) {
  return g.suffix(g.size() - (inclusive ? cuts[j - 1] : cuts[j]));
}

inline ZSplit z_split(const Word& g, const PieceBounds& cuts, std::size_t j, bool inclusive) {
  return ZSplit{z_before(g, cuts, j, inclusive), z_piece(g, cuts, j), z_after(g, cuts, j, inclusive)};
}

class Eta1 final : public CustomCochain {
 public:
  Eta1(CochainExpr omega1, QuasiMorphism phi, bool inclusive)
      : omega1_(std::move(omega1)), phi_(std::move(phi)), inclusive_(inclusive) {}
  int degree() const override { return omega1_.degree(); }
  std::string name() const override { return "eta1"; }
  Rational evaluate(std::span<const Word> t, EvalContext& ctx) const override {
    const std::size_t k = t.size();
    const Word& g = t[k - 1];
    const PieceBounds cuts = piece_bounds(phi_.spec(), g);
    Tuple buf(t.begin(), t.end());
    Rational sum;
    for (std::size_t j = 1; j < cuts.size(); ++j) {
      const Rational p = phi_(z_piece(g, cuts, j));
      if (p.is_zero()) continue;
      buf[k - 1] = z_before(g, cuts, j, inclusive_);
      sum += massey::evaluate(omega1_, buf, ctx) * p;
    }
    return sum;
  }

 private:
  CochainExpr omega1_;
  QuasiMorphism phi_;
  bool inclusive_;
};

class Eta2 final : public CustomCochain {
 public:
  Eta2(CochainExpr omega2, QuasiMorphism phi, bool inclusive)
      : omega2_(std::move(omega2)), phi_(std::move(phi)), inclusive_(inclusive) {}
  int degree() const override { return omega2_.degree(); }
  std::string name() const override { return "eta2"; }
  Rational evaluate(std::span<const Word> t, EvalContext& ctx) const override {
    const Word& h = t[0];
    const PieceBounds cuts = piece_bounds(phi_.spec(), h);
    Tuple buf(t.begin(), t.end());
    Rational sum;
    for (std::size_t j = 1; j < cuts.size(); ++j) {
      const Rational p = phi_(z_piece(h, cuts, j));
      if (p.is_zero()) continue;
      buf[0] = z_after(h, cuts, j, inclusive_);
      sum += p * massey::evaluate(omega2_, buf, ctx);
    }
    return sum;
  }

 private:
  CochainExpr omega2_;
  QuasiMorphism phi_;
  bool inclusive_;
};

// eta(g_1..g_{k1-1}, e, h_2..h_{k2}); `scale` is -1 under the sign mutation.
class EtaBridge final : public CustomCochain {
 public:
  EtaBridge(CochainExpr omega1, CochainExpr omega2, QuasiMorphism phi, bool inclusive, Rational scale)
      : omega1_(std::move(omega1)), omega2_(std::move(omega2)), phi_(std::move(phi)), inclusive_(inclusive),
        scale_(scale) {}
  int degree() const override { return omega1_.degree() + omega2_.degree() - 1; }
  std::string name() const override { return "eta"; }
  Rational evaluate(std::span<const Word> t, EvalContext& ctx) const override {
    const auto k1 = static_cast<std::size_t>(omega1_.degree());
    const Word& e = t[k1 - 1];
    const PieceBounds cuts = piece_bounds(phi_.spec(), e);
    Tuple left(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(k1));
    Tuple right(t.begin() + static_cast<std::ptrdiff_t>(k1 - 1), t.end());
    Rational sum;
    for (std::size_t j = 1; j < cuts.size(); ++j) {
      const Rational p = phi_(z_piece(e, cuts, j));
      if (p.is_zero()) continue;
      left[k1 - 1] = z_before(e, cuts, j, inclusive_);
      const Rational w1 = massey::evaluate(omega1_, left, ctx);
      if (w1.is_zero()) continue;
      right[0] = z_after(e, cuts, j, inclusive_);
      sum += w1 * p * massey::evaluate(omega2_, right, ctx);
    }
    return scale_ * sum;
  }

 private:
  CochainExpr omega1_, omega2_;
  QuasiMorphism phi_;
  bool inclusive_;
  Rational scale_;
};

inline Rational sign_pow(int k) { return k % 2 == 0 ? Rational{1} : Rational{-1}; }

inline QuasiMorphism perturbed(const QuasiMorphism& phi) {
  auto reps = phi.lambda().representatives();
  if (reps.empty()) {
    std::vector<Letter> a{Letter::from_index(0)};
    reps.emplace_back(reduce(a, phi.rank()), Rational{1});
  } else {
    reps.front().second += 1;
  }
  return QuasiMorphism(phi.spec(), LambdaTable(reps));
}

}  // namespace detail

// Every cochain of the construction, built once per instance.
struct MasseyConstruction {
  CochainExpr phi, delta_phi;
  CochainExpr eta1, eta2, beta1, beta2, eta, mu, mu_simplified, primitive;
};

inline MasseyConstruction build_construction(const MasseyInstance& m, Mutation mutation = Mutation::None) {
  const QuasiMorphism q = mutation == Mutation::PerturbLambda ? detail::perturbed(m.phi()) : m.phi();
  const bool inclusive = mutation == Mutation::InclusiveZ;
  const Rational eta_scale = mutation == Mutation::FlipEtaSign ? Rational{-1} : Rational{1};
  const Rational s1 = detail::sign_pow(m.k1());
  const CochainExpr& w1 = m.omega1();
  const CochainExpr& w2 = m.omega2();

  MasseyConstruction c{CochainExpr::qm(q), coboundary(CochainExpr::qm(q)),
                       CochainExpr::custom(std::make_shared<detail::Eta1>(w1, q, inclusive)),
                       CochainExpr::custom(std::make_shared<detail::Eta2>(w2, q, inclusive)),
                       // placeholders, filled below
                       CochainExpr::constant(0), CochainExpr::constant(0),
                       CochainExpr::custom(std::make_shared<detail::EtaBridge>(w1, w2, q, inclusive, eta_scale)),
                       CochainExpr::constant(0), CochainExpr::constant(0), CochainExpr::constant(0)};
  c.beta1 = lincomb({{s1, cup(w1, c.phi)}, {-1, coboundary(c.eta1)}});
  c.beta2 = cup(c.phi, w2) + coboundary(c.eta2);
  // (-1)^k with k = 2 for the middle class
  c.mu = lincomb({{s1, cup(w1, c.beta2)}, {-1, cup(c.beta1, w2)}});
  c.mu_simplified = lincomb({{s1, cup(w1, coboundary(c.eta2))}, {1, cup(coboundary(c.eta1), w2)}});
  c.primitive = lincomb({{1, cup(w1, c.eta2)}, {1, cup(c.eta1, w2)}, {-s1, coboundary(c.eta)}});
  return c;
}

inline CochainExpr eta1(const MasseyInstance& m) { return build_construction(m).eta1; }
inline CochainExpr eta2(const MasseyInstance& m) { return build_construction(m).eta2; }
inline CochainExpr beta1(const MasseyInstance& m) { return build_construction(m).beta1; }
inline CochainExpr beta2(const MasseyInstance& m) { return build_construction(m).beta2; }
inline CochainExpr eta_bridge(const MasseyInstance& m) { return build_construction(m).eta; }
inline CochainExpr massey_representative(const MasseyInstance& m) { return build_construction(m).mu; }
inline CochainExpr bounded_primitive(const MasseyInstance& m) { return build_construction(m).primitive; }

struct TriangleTerm {
  int side;        // 1: g, 2: h, 3: gh
  std::size_t j;   // 1-based piece index on that side
  Rational value;  // contribution to the total (side 3 already negated)
};

struct TriangleTermLedger {
  std::vector<TriangleTerm> surviving_terms;
  std::size_t canceled_count = 0;   // canceled pairs
  std::size_t canceled_c1 = 0, canceled_c3 = 0;
  std::size_t bound = 0;            // |Delta(r1)| + |Delta(r2)| + |Delta(r3)|
  std::size_t mismatched_pairs = 0; // index-matched pairs whose values do not cancel
  Rational surviving_sum;
  TriangleDecomposition triangle;
};

struct ThreeSum {
  Rational value;
  TriangleTermLedger ledger;
};

// The three side sums of the geodesic triangle (1, g, gh) with g = t[k1-1],
// h = t[k1], computed directly from the lambda table and the omegas.
inline ThreeSum three_sum_residual(const MasseyInstance& m, std::span<const Word> t) {
  const auto k1 = static_cast<std::size_t>(m.k1());
  const auto K = k1 + static_cast<std::size_t>(m.k2());
  if (t.size() != K)
    throw UsageError("three_sum_residual: tuple of arity " + std::to_string(t.size()) + ", expected " +
                     std::to_string(K));
  if (!is_aligned(t)) throw UsageError("three_sum_residual: tuple " + tuple_to_string(t) + " is not aligned");
  const DecompositionSpec& spec = m.spec();
  const LambdaTable& lambda = m.phi().lambda();
  const Word& g = t[k1 - 1];
  const Word& h = t[k1];
  const Word gh = multiply(g, h);
  EvalContext ctx;

  Tuple left(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(k1));
  Tuple right(t.begin() + static_cast<std::ptrdiff_t>(k1), t.end());
  auto term = [&](const Word& left_last, const Word& piece, const Word& right_first) {
    left[k1 - 1] = left_last;
    right[0] = right_first;
    const Rational a = evaluate(m.omega1(), left, ctx);
    if (a.is_zero()) return Rational{};
    return a * lambda(piece) * evaluate(m.omega2(), right, ctx);
  };
  auto pieces = [&](const Word& w) {
    const PieceBounds c = piece_bounds(spec, w);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t j = 1; j < c.size(); ++j) out.emplace_back(c[j - 1], c[j]);
    return out;
  };

  std::vector<Rational> side1, side2, side3;
  for (auto [lo, hi] : pieces(g))
    side1.push_back(term(g.prefix(lo), g.subword(lo, hi - lo), multiply(g.suffix(g.size() - hi), h)));
  for (auto [lo, hi] : pieces(h))
    side2.push_back(term(multiply(g, h.prefix(lo)), h.subword(lo, hi - lo), h.suffix(h.size() - hi)));
  for (auto [lo, hi] : pieces(gh))
    side3.push_back(-term(gh.prefix(lo), gh.subword(lo, hi - lo), gh.suffix(gh.size() - hi)));

  ThreeSum out;
  for (const auto* side : {&side1, &side2, &side3})
    for (const Rational& v : *side) out.value += v;

  TriangleTermLedger& L = out.ledger;
  L.triangle = triangle_split(spec, g, h);
  const auto& tri = L.triangle;
  L.bound = tri.thick_total();
  L.canceled_c1 = std::min({tri.corner_lengths[0], side1.size(), side3.size()});
  L.canceled_c3 = std::min({tri.corner_lengths[2], side2.size(), side3.size() - L.canceled_c1});
  for (std::size_t j = 0; j < L.canceled_c1; ++j)
    if (!(side1[j] + side3[j]).is_zero()) ++L.mismatched_pairs;
  for (std::size_t j = 0; j < L.canceled_c3; ++j)
    if (!(side2[side2.size() - 1 - j] + side3[side3.size() - 1 - j]).is_zero()) ++L.mismatched_pairs;
  L.canceled_count = L.canceled_c1 + L.canceled_c3;
  auto keep = [&](int side, const std::vector<Rational>& values, std::size_t skip_front, std::size_t skip_back) {
    for (std::size_t j = skip_front; j + skip_back < values.size(); ++j) {
      L.surviving_terms.push_back({side, j + 1, values[j]});
      L.surviving_sum += values[j];
    }
  };
  keep(1, side1, L.canceled_c1, 0);
  keep(2, side2, 0, L.canceled_c3);
  keep(3, side3, L.canceled_c1, L.canceled_c3);
  return out;
}

// Constants measured on the true instance and shared by the bound stages.
struct MeasuredConstants {
  std::size_t r_hat = 0;
  std::optional<std::pair<Word, Word>> r_hat_witness;
  SupStats omega1, omega2;
  Rational lambda_norm;

  Rational term_bound() const { return omega1.max_abs * lambda_norm * omega2.max_abs; }
  Rational assembled_bound() const { return Rational{static_cast<std::int64_t>(3 * r_hat)} * term_bound(); }
};

inline MeasuredConstants measure_constants(const MasseyInstance& m, const ExperimentPlan& plan) {
  MeasuredConstants mc;
  mc.r_hat = measure_thick_constant(m.spec(), plan.pair_radius, plan.enumeration_cap, &mc.r_hat_witness);
  auto sup = [&](const CochainExpr& w, const std::string& stage) {
    SupPlan sp;
    sp.exhaustive = plan.domain(w.degree());
    sp.random_count = plan.samples_for(stage);
    sp.max_len = plan.random_max_len;
    sp.seed = derive_seed(plan.seed, stage);
    sp.cap = plan.enumeration_cap;
    return sup_norm_estimate(w, sp);
  };
  mc.omega1 = sup(m.omega1(), "sup-omega1");
  mc.omega2 = sup(m.omega2(), "sup-omega2");
  mc.lambda_norm = m.phi().lambda().sup_norm();
  return mc;
}

enum class VerifyScope { PrimitivesOnly, Full };

namespace detail {

inline TupleDomain stage_domain(const ExperimentPlan& plan, const std::string& stage, int arity) {
  TupleDomain d;
  d.exhaustive = plan.domain(arity);
  d.random_count = plan.samples_for(stage);
  d.max_len = plan.random_max_len;
  d.seed = plan.seed;
  d.stream = stage;
  d.cap = plan.enumeration_cap;
  return d;
}

inline nlohmann::json sup_json(const SupStats& s) {
  nlohmann::json j{{"max_abs", s.max_abs.to_string()}, {"count", s.count}};
  if (s.argmax) j["argmax"] = tuple_json(*s.argmax);
  return j;
}

}  // namespace detail

// Default per-stage sample counts: the top-degree checks are the expensive
// ones and get fewer random tuples.
inline ExperimentPlan default_massey_plan() {
  ExperimentPlan p;
  p.sample_counts["representative-cocycle"] = 1000;
  return p;
}

inline VerificationReport verify_massey_triviality(const MasseyInstance& m, const ExperimentPlan& plan,
                                                   Mutation mutation = Mutation::None,
                                                   VerifyScope scope = VerifyScope::Full) {
  plan.validate();
  if (plan.rank != m.rank())
    throw ConfigError("plan rank " + std::to_string(plan.rank) + " differs from instance rank " +
                      std::to_string(m.rank()));
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport report;
  report.command = scope == VerifyScope::Full ? "massey" : "verify-primitive";
  const MasseyConstruction c = build_construction(m, mutation);
  const CochainExpr true_dphi = coboundary(CochainExpr::qm(m.phi()));
  const CochainExpr& w1 = m.omega1();
  const CochainExpr& w2 = m.omega2();
  const int k1 = m.k1(), k2 = m.k2(), K = k1 + k2;
  const int jobs = plan.jobs;

  auto identity = [&](const std::string& stage, const CochainExpr& lhs, const CochainExpr& rhs) {
    const auto dom = detail::stage_domain(plan, stage, lhs.degree());
    return check_pointwise(
        stage, dom, [&](std::span<const Word> t, EvalContext& ctx) { return expect_equal(evaluate(lhs, t, ctx), evaluate(rhs, t, ctx)); },
        jobs);
  };
  const CochainExpr zero1 = CochainExpr::table(k1 + 1, {});
  const CochainExpr zero2 = CochainExpr::table(k2 + 1, {});

  report.stages.push_back(identity("cocycle-omega1", coboundary(w1), zero1));
  report.stages.push_back(identity("cocycle-omega2", coboundary(w2), zero2));
  report.stages.push_back(identity("primitive-beta1", coboundary(c.beta1), cup(w1, true_dphi)));
  report.stages.push_back(identity("primitive-beta2", coboundary(c.beta2), cup(true_dphi, w2)));

  if (scope == VerifyScope::Full) {
    report.stages.push_back(identity("representative-simplification", c.mu, c.mu_simplified));
    report.stages.push_back(identity("representative-cocycle", coboundary(c.mu), CochainExpr::table(K + 2, {})));
    report.stages.push_back(identity("bounded-primitive", coboundary(c.primitive), c.mu));

    report.stages.push_back(check_pointwise(
        "three-sum", detail::stage_domain(plan, "three-sum", K),
        [&](std::span<const Word> t, EvalContext& ctx) {
          return expect_equal(evaluate(c.primitive, t, ctx), three_sum_residual(m, t).value);
        },
        jobs));

    const MeasuredConstants mc = measure_constants(m, plan);
    const Rational term_bound = mc.term_bound();

    StageRecord ledger = check_pointwise(
        "cancellation-ledger", detail::stage_domain(plan, "cancellation-ledger", K),
        [&](std::span<const Word> t, EvalContext&) -> std::optional<nlohmann::json> {
          const ThreeSum s = three_sum_residual(m, t);
          const auto& L = s.ledger;
          std::vector<std::string> problems;
          if (!L.triangle.c2.empty()) problems.push_back("c2 != 1");
          if (L.canceled_c1 != L.triangle.corner_lengths[0] || L.canceled_c3 != L.triangle.corner_lengths[2])
            problems.push_back("canceled pairs differ from |Delta(c1)|, |Delta(c3)|");
          if (L.mismatched_pairs != 0) problems.push_back("index-matched pair does not cancel");
          if (L.surviving_sum != s.value) problems.push_back("surviving terms do not sum to the total");
          if (L.surviving_terms.size() > L.bound) problems.push_back("more surviving terms than thick pieces");
          if (L.bound > 3 * mc.r_hat) problems.push_back("thick total exceeds 3 R-hat");
          if (problems.empty()) return std::nullopt;
          return nlohmann::json{{"problems", problems},
                                {"surviving", L.surviving_terms.size()},
                                {"bound", L.bound},
                                {"mismatched_pairs", L.mismatched_pairs}};
        },
        jobs);
    report.stages.push_back(std::move(ledger));

    report.stages.push_back(check_pointwise(
        "pointwise-bound", detail::stage_domain(plan, "pointwise-bound", K),
        [&](std::span<const Word> t, EvalContext& ctx) -> std::optional<nlohmann::json> {
          const Rational p = evaluate(c.primitive, t, ctx);
          const auto tri = triangle_split(m.spec(), t[static_cast<std::size_t>(k1) - 1], t[static_cast<std::size_t>(k1)]);
          const Rational limit = Rational{static_cast<std::int64_t>(tri.thick_total())} * term_bound;
          if (abs(p) <= limit) return std::nullopt;
          return nlohmann::json{{"value", p.to_string()}, {"limit", limit.to_string()}};
        },
        jobs));

    // sup|P| plateau over the ladder; every rung also sees the exhaustive set.
    StageRecord plateau;
    plateau.name = "sup-plateau";
    SupPlan sp;
    sp.exhaustive = plan.domain(K);
    sp.cap = plan.enumeration_cap;
    const SupStats base = sup_norm_estimate(c.primitive, [&] {
      SupPlan b = sp;
      b.random_count = 0;
      return b;
    }());
    sp.use_exhaustive = false;
    nlohmann::json rungs = nlohmann::json::array();
    std::vector<Rational> sups;
    const Rational limit = mc.assembled_bound();
    for (std::size_t len : plan.max_len_ladder) {
      sp.random_count = plan.ladder_samples;
      sp.max_len = len;
      sp.seed = derive_seed(plan.seed, "sup-plateau-" + std::to_string(len));
      SupStats s = sup_norm_estimate(c.primitive, sp);
      plateau.checked += s.count;
      Rational sup = std::max(base.max_abs, s.max_abs);
      const auto& argmax = s.max_abs > base.max_abs ? s.argmax : base.argmax;
      nlohmann::json r{{"max_len", len}, {"sup", sup.to_string()}, {"random_sup", s.max_abs.to_string()}};
      if (argmax) r["argmax"] = tuple_json(*argmax);
      rungs.push_back(r);
      sups.push_back(sup);
    }
    plateau.checked += base.count;
    for (std::size_t i = 0; i < sups.size(); ++i) {
      const bool grows = i >= 2 && sups[i] > sups[i - 1];
      const bool over = sups[i] > limit;
      if (grows || over) {
        ++plateau.violations;
        if (!plateau.counterexample)
          plateau.counterexample = nlohmann::json{{"rung", plan.max_len_ladder[i]},
                                                  {"sup", sups[i].to_string()},
                                                  {"reason", over ? "exceeds 3 R-hat bound" : "grows after first rung"}};
      }
    }
    plateau.passed = plateau.violations == 0;
    plateau.stats = {{"exhaustive_sup", base.max_abs.to_string()}, {"rungs", rungs}, {"limit", limit.to_string()}};
    report.stages.push_back(std::move(plateau));

    report.measured = {{"r_hat", mc.r_hat},
                       {"pair_radius", plan.pair_radius},
                       {"omega1_sup", detail::sup_json(mc.omega1)},
                       {"omega2_sup", detail::sup_json(mc.omega2)},
                       {"lambda_sup", mc.lambda_norm.to_string()},
                       {"assembled_bound", limit.to_string()}};
    if (mc.r_hat_witness)
      report.measured["r_hat_witness"] = {mc.r_hat_witness->first.to_string(), mc.r_hat_witness->second.to_string()};
  }

  report.config["mutation"] = mutation_name(mutation);
  // With k_i = 1 the z-product tuples shrink to a single entry; the values
  // then depend on the extension-by-zero convention at the identity.
  report.config["convention_dependent"] = k1 == 1 || k2 == 1;
  report.config["k1"] = k1;
  report.config["k2"] = k2;
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace massey
