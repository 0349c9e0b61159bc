#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "massey/errors.hpp"
#include "massey/freegroup.hpp"
#include "massey/quasimorphism.hpp"
#include "massey/rational.hpp"
#include "massey/tuples.hpp"

namespace massey {

// Extension-by-zero bookkeeping. Aligned-only nodes return 0 outside B^k;
// the counters separate tuples that contain the identity from tuples whose
// entries are nontrivial but fail to concatenate reduced.
struct EvalContext {
  std::uint64_t identity_zeros = 0;
  std::uint64_t misaligned_zeros = 0;
};

// Evaluator plugged into an expression from outside this module.
class CustomCochain {
 public:
  virtual ~CustomCochain() = default;
  virtual int degree() const = 0;
  virtual std::string name() const = 0;
  // `t` has exactly degree() entries.
  virtual Rational evaluate(std::span<const Word> t, EvalContext& ctx) const = 0;
};

class CochainExpr;
CochainExpr lincomb(const std::vector<std::pair<Rational, CochainExpr>>& terms);

namespace node {
struct Node;

struct Qm {
  QuasiMorphism q;
};
struct Constant {
  Rational value;
};
struct Table {
  int degree;
  std::map<Tuple, Rational> values;  // aligned-only, default 0
};
struct Coboundary {
  std::shared_ptr<const Node> child;
};
struct Cup {
  std::shared_ptr<const Node> left, right;
};
struct Alt {
  std::shared_ptr<const Node> child;
};
struct LinComb {
  std::vector<Rational> coefficients;
  std::vector<std::shared_ptr<const Node>> terms;
};
struct Restrict {
  std::shared_ptr<const Node> child;
};
struct Custom {
  std::shared_ptr<const CustomCochain> impl;
};

struct Node {
  int degree;
  std::variant<Qm, Constant, Table, Coboundary, Cup, Alt, LinComb, Restrict, Custom> body;
};
}  // namespace node

// Immutable, shareable cochain expression. Degrees are synthesized:
// QM 1, constant 0, cup adds, coboundary adds one, alt and restrict keep.
class CochainExpr {
 public:
  enum class Kind { Qm, Constant, Table, Coboundary, Cup, Alt, LinComb, Restrict, Custom };

  int degree() const { return node_->degree; }
  Kind kind() const { return static_cast<Kind>(node_->body.index()); }

  static CochainExpr qm(QuasiMorphism q) { return make(1, node::Qm{std::move(q)}); }
  static CochainExpr constant(Rational c) { return make(0, node::Constant{c}); }
  static CochainExpr table(int degree, std::map<Tuple, Rational> values) {
    if (degree < 0) throw UsageError("table cochain: negative degree");
    for (const auto& [t, v] : values)
      if (static_cast<int>(t.size()) != degree)
        throw ConfigError("table cochain: tuple " + tuple_to_string(t) + " does not have arity " + std::to_string(degree));
    return make(degree, node::Table{degree, std::move(values)});
  }
  static CochainExpr custom(std::shared_ptr<const CustomCochain> impl) {
    const int d = impl->degree();
    return make(d, node::Custom{std::move(impl)});
  }

  friend CochainExpr coboundary(const CochainExpr& e) { return make(e.degree() + 1, node::Coboundary{e.node_}); }
  friend CochainExpr cup(const CochainExpr& a, const CochainExpr& b) {
    return make(a.degree() + b.degree(), node::Cup{a.node_, b.node_});
  }
  friend CochainExpr alternate(const CochainExpr& e) { return make(e.degree(), node::Alt{e.node_}); }
  friend CochainExpr restrict_aligned(const CochainExpr& e) {
    if (e.kind() == Kind::Restrict || e.kind() == Kind::Table) return e;
    return make(e.degree(), node::Restrict{e.node_});
  }
  friend CochainExpr lincomb(const std::vector<std::pair<Rational, CochainExpr>>& terms) {
    if (terms.empty()) throw UsageError("lincomb: no terms");
    node::LinComb lc;
    const int d = terms.front().second.degree();
    for (const auto& [c, e] : terms) {
      if (e.degree() != d) throw UsageError("lincomb: mixed degrees");
      lc.coefficients.push_back(c);
      lc.terms.push_back(e.node_);
    }
    return make(d, std::move(lc));
  }

  friend CochainExpr operator+(const CochainExpr& a, const CochainExpr& b) { return lincomb({{1, a}, {1, b}}); }
  friend CochainExpr operator-(const CochainExpr& a, const CochainExpr& b) { return lincomb({{1, a}, {-1, b}}); }
  friend CochainExpr operator*(const Rational& c, const CochainExpr& e) { return lincomb({{c, e}}); }

  // Children for inspection and serialization.
  std::vector<CochainExpr> children() const;
  const node::Node& node() const { return *node_; }

  friend Rational evaluate(const CochainExpr& e, std::span<const Word> t, EvalContext& ctx);

 private:
  explicit CochainExpr(std::shared_ptr<const node::Node> n) : node_(std::move(n)) {}

  template <class Body>
  static CochainExpr make(int degree, Body&& body) {
    return CochainExpr(std::make_shared<const node::Node>(node::Node{degree, std::forward<Body>(body)}));
  }

  static Rational eval_node(const node::Node& n, std::span<const Word> t, EvalContext& ctx);

  std::shared_ptr<const node::Node> node_;
};

inline std::vector<CochainExpr> CochainExpr::children() const {
  std::vector<CochainExpr> out;
  std::visit(
      [&](const auto& b) {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, node::Coboundary> || std::is_same_v<B, node::Alt> ||
                      std::is_same_v<B, node::Restrict>) {
          out.emplace_back(CochainExpr(b.child));
        } else if constexpr (std::is_same_v<B, node::Cup>) {
          out.emplace_back(CochainExpr(b.left));
          out.emplace_back(CochainExpr(b.right));
        } else if constexpr (std::is_same_v<B, node::LinComb>) {
          for (const auto& t : b.terms) out.emplace_back(CochainExpr(t));
        }
      },
      node_->body);
  return out;
}

namespace detail {

inline bool aligned_or_count(std::span<const Word> t, EvalContext& ctx) {
  if (is_aligned(t)) return true;
  bool has_identity = false;
  for (const Word& w : t) has_identity = has_identity || w.empty();
  if (has_identity)
    ++ctx.identity_zeros;
  else
    ++ctx.misaligned_zeros;
  return false;
}

// (-1)^ceil(k/2)
inline int alternation_sign(int k) { return ((k + 1) / 2) % 2 == 0 ? 1 : -1; }

}  // namespace detail

inline Rational CochainExpr::eval_node(const node::Node& n, std::span<const Word> t, EvalContext& ctx) {
  return std::visit(
      [&](const auto& b) -> Rational {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, node::Qm>) {
          return b.q(t[0]);
        } else if constexpr (std::is_same_v<B, node::Constant>) {
          return b.value;
        } else if constexpr (std::is_same_v<B, node::Table>) {
          if (!detail::aligned_or_count(t, ctx)) return Rational{};
          auto it = b.values.find(Tuple(t.begin(), t.end()));
          return it == b.values.end() ? Rational{} : it->second;
        } else if constexpr (std::is_same_v<B, node::Coboundary>) {
          // delta^k f(g_1..g_{k+1}) = f(g_2..) + sum_i (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^{k+1} f(g_1..g_k)
          const node::Node& child = *b.child;
          const std::size_t k = t.size() - 1;
          Rational sum = eval_node(child, t.subspan(1), ctx);
          Tuple merged(k, Word(t.empty() ? 2 : t[0].rank()));
          for (std::size_t i = 1; i <= k; ++i) {
            for (std::size_t p = 0; p + 1 < i; ++p) merged[p] = t[p];
            merged[i - 1] = multiply(t[i - 1], t[i]);
            for (std::size_t p = i + 1; p <= k; ++p) merged[p - 1] = t[p];
            const Rational v = eval_node(child, merged, ctx);
            if (i % 2 == 0)
              sum += v;
            else
              sum -= v;
          }
          const Rational last = eval_node(child, t.first(k), ctx);
          if ((k + 1) % 2 == 0)
            sum += last;
          else
            sum -= last;
          return sum;
        } else if constexpr (std::is_same_v<B, node::Cup>) {
          const auto p = static_cast<std::size_t>(b.left->degree);
          const Rational left = eval_node(*b.left, t.first(p), ctx);
          if (left.is_zero()) return Rational{};
          return left * eval_node(*b.right, t.subspan(p), ctx);
        } else if constexpr (std::is_same_v<B, node::Alt>) {
          const int k = static_cast<int>(t.size());
          if (k == 0) return eval_node(*b.child, t, ctx);
          Tuple flipped;
          flipped.reserve(t.size());
          for (auto it = t.rbegin(); it != t.rend(); ++it) flipped.push_back(invert(*it));
          Rational sum = eval_node(*b.child, t, ctx);
          const Rational other = eval_node(*b.child, flipped, ctx);
          if (detail::alternation_sign(k) > 0)
            sum += other;
          else
            sum -= other;
          return sum / 2;
        } else if constexpr (std::is_same_v<B, node::LinComb>) {
          Rational sum;
          for (std::size_t i = 0; i < b.terms.size(); ++i) sum += b.coefficients[i] * eval_node(*b.terms[i], t, ctx);
          return sum;
        } else if constexpr (std::is_same_v<B, node::Restrict>) {
          if (!detail::aligned_or_count(t, ctx)) return Rational{};
          return eval_node(*b.child, t, ctx);
        } else {
          return b.impl->evaluate(t, ctx);
        }
      },
      n.body);
}

inline Rational evaluate(const CochainExpr& e, std::span<const Word> t, EvalContext& ctx) {
  if (static_cast<int>(t.size()) != e.degree())
    throw UsageError("eval: tuple of arity " + std::to_string(t.size()) + " for a degree-" +
                     std::to_string(e.degree()) + " cochain");
  return CochainExpr::eval_node(*e.node_, t, ctx);
}

inline Rational evaluate(const CochainExpr& e, std::span<const Word> t) {
  EvalContext ctx;
  return evaluate(e, t, ctx);
}

inline Rational evaluate(const CochainExpr& e, std::initializer_list<Word> t) {
  const Tuple tuple(t);
  return evaluate(e, std::span<const Word>(tuple));
}

// Sampling plan for sup-norm estimates: the exhaustive domain plus random
// aligned tuples with entry lengths up to max_len.
struct SupPlan {
  AlignedDomain exhaustive;
  bool use_exhaustive = true;
  std::size_t random_count = 0;
  std::size_t max_len = 25;
  std::uint64_t seed = 1;
  std::uint64_t cap = kDefaultEnumerationCap;
};

struct SupStats {
  Rational max_abs;
  std::optional<Tuple> argmax;
  std::map<Rational, std::uint64_t> histogram;  // value -> occurrences
  std::uint64_t count = 0;
};

inline SupStats sup_norm_estimate(const CochainExpr& e, const SupPlan& plan) {
  SupPlan p = plan;
  p.exhaustive.arity = e.degree();
  SupStats stats;
  EvalContext ctx;
  auto visit = [&](std::span<const Word> t) {
    const Rational v = evaluate(e, t, ctx);
    ++stats.count;
    ++stats.histogram[v];
    if (!stats.argmax || abs(v) > stats.max_abs) {
      stats.max_abs = abs(v);
      stats.argmax = Tuple(t.begin(), t.end());
    }
  };
  if (p.use_exhaustive) for_each_aligned_tuple(p.exhaustive, p.cap, visit);
  Rng rng(derive_seed(p.seed, "sup-norm"));
  for (std::size_t i = 0; i < p.random_count; ++i) {
    const Tuple t = sample_aligned_tuple(rng, p.exhaustive.rank, e.degree(), p.max_len);
    visit(t);
  }
  return stats;
}

}  // namespace massey
