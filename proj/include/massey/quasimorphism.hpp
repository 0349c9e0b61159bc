#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "massey/decomposition.hpp"
#include "massey/errors.hpp"
#include "massey/freegroup.hpp"
#include "massey/random.hpp"
#include "massey/rational.hpp"

namespace massey {

// Bounded alternating function on pieces; unlisted pieces map to 0.
// Construction inserts lambda(p^-1) = -lambda(p) for every listed p and
// rejects tables that list both p and p^-1 with inconsistent values.
class LambdaTable {
 public:
  LambdaTable() = default;

  explicit LambdaTable(const std::vector<std::pair<Word, Rational>>& entries) {
    for (const auto& [piece, value] : entries) insert(piece, value);
  }

  Rational operator()(const Word& piece) const {
    auto it = entries_.find(piece);
    return it == entries_.end() ? Rational{} : it->second;
  }

  Rational sup_norm() const {
    Rational best;
    for (const auto& [piece, value] : entries_) best = std::max(best, abs(value));
    return best;
  }

  const std::map<Word, Rational>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  // The listed entries with one representative per {p, p^-1} pair, in map order.
  std::vector<std::pair<Word, Rational>> representatives() const {
    std::vector<std::pair<Word, Rational>> out;
    for (const auto& [piece, value] : entries_) {
      const Word inv = invert(piece);
      if (piece < inv) out.emplace_back(piece, value);
    }
    return out;
  }

 private:
  void insert(const Word& piece, const Rational& value) {
    if (piece.empty()) throw ConfigError("lambda: the identity is not a piece");
    const Word inv = invert(piece);
    set(piece, value);
    set(inv, -value);
  }

  void set(const Word& piece, const Rational& value) {
    auto [it, inserted] = entries_.emplace(piece, value);
    if (!inserted && it->second != value)
      throw ConfigError("lambda: contradictory values for piece '" + piece.to_string() + "' (" +
                        it->second.to_string() + " vs " + value.to_string() + ")");
  }

  std::map<Word, Rational> entries_;
};

// phi_{lambda, Delta}(g) = sum of lambda over the pieces of Delta(g).
class QuasiMorphism {
 public:
  QuasiMorphism(DecompositionSpec spec, LambdaTable lambda) : spec_(std::move(spec)), lambda_(std::move(lambda)) {
    for (const auto& [piece, value] : lambda_.entries())
      if (!spec_.is_piece(piece))
        throw ConfigError("lambda key '" + piece.to_string() + "' is not a piece of " + spec_.describe());
    build_fast_paths();
  }

  const DecompositionSpec& spec() const { return spec_; }
  const LambdaTable& lambda() const { return lambda_; }
  int rank() const { return spec_.rank(); }

  Rational operator()(const Word& g) const { return evaluate(g); }

  Rational evaluate(const Word& g) const {
    if (g.rank() != rank())
      throw UsageError("eval_qm: rank mismatch (" + std::to_string(g.rank()) + " vs " + std::to_string(rank()) + ")");
    const auto letters = g.letters();
    const std::size_t n = letters.size();
    Rational sum;
    switch (spec_.family()) {
      case Family::Letter:
        for (Letter l : letters) sum += letter_value_[static_cast<std::size_t>(l.index())];
        break;
      case Family::Rolli: {
        std::size_t i = 0;
        while (i < n) {
          std::size_t j = i;
          while (j < n && letters[j].generator() == letters[i].generator()) ++j;
          auto it = power_value_.find({letters[i].code(), static_cast<int>(j - i)});
          if (it != power_value_.end()) sum += it->second;
          i = j;
        }
        break;
      }
      case Family::Brooks: {
        // Left-to-right scan; occurrences of w^{+-1} are disjoint, so this
        // visits exactly the pieces of Delta(g).
        const auto w = spec_.brooks_word().letters();
        const auto winv = spec_.brooks_inverse().letters();
        std::size_t i = 0;
        while (i < n) {
          if (detail::matches_at(letters, i, w)) {
            sum += word_value_;
            i += w.size();
          } else if (detail::matches_at(letters, i, winv)) {
            sum -= word_value_;
            i += w.size();
          } else {
            sum += letter_value_[static_cast<std::size_t>(letters[i].index())];
            ++i;
          }
        }
        break;
      }
    }
    return sum;
  }

  // lambda of a single piece (= phi(piece), by axiom (iii)).
  Rational piece_value(const Word& piece) const { return lambda_(piece); }

 private:
  void build_fast_paths() {
    letter_value_.assign(2 * static_cast<std::size_t>(rank()), Rational{});
    for (int idx = 0; idx < 2 * rank(); ++idx) {
      std::vector<Letter> one{Letter::from_index(idx)};
      letter_value_[static_cast<std::size_t>(idx)] = lambda_(reduce(one, rank()));
    }
    if (spec_.family() == Family::Brooks) {
      word_value_ = lambda_(spec_.brooks_word());
      if (spec_.brooks_word().size() == 1) {
        // w is itself a letter; the letter table already carries its value.
        word_value_ = letter_value_[static_cast<std::size_t>(spec_.brooks_word().front().index())];
      }
    }
    if (spec_.family() == Family::Rolli)
      for (const auto& [piece, value] : lambda_.entries())
        power_value_[{piece.front().code(), static_cast<int>(piece.size())}] = value;
  }

  DecompositionSpec spec_;
  LambdaTable lambda_;
  std::vector<Rational> letter_value_;
  Rational word_value_;
  std::map<std::pair<int, int>, Rational> power_value_;  // (signed generator, block length)
};

inline Rational eval_qm(const QuasiMorphism& q, const Word& g) { return q.evaluate(g); }

// phi(g) + phi(h) - phi(gh); numerically equal to the inhomogeneous
// coboundary (delta phi)(g, h) = phi(h) - phi(gh) + phi(g).
inline Rational defect(const QuasiMorphism& q, const Word& g, const Word& h) {
  require_same_rank(g, h);
  return q(g) + q(h) - q(multiply(g, h));
}

struct DefectPlan {
  int exhaustive_radius = 4;   // all pairs from this ball
  std::size_t random_pairs = 0;
  std::size_t max_len = 50;    // random entries have length uniform in [0, max_len]; odd draws cancel
  std::uint64_t seed = 1;
  std::uint64_t cap = kDefaultEnumerationCap;
};

struct DefectStats {
  Rational max_abs;
  std::optional<std::pair<Word, Word>> argmax;
  std::uint64_t count = 0;
};

// Visits the pairs of a DefectPlan: all pairs from the exhaustive ball, then
// the random pairs (every second one with a cancelling junction).
template <class Fn>
void for_each_defect_pair(int rank, const DefectPlan& plan, Fn&& fn) {
  if (plan.exhaustive_radius >= 0) {
    const std::vector<Word> ball = enumerate_ball(rank, plan.exhaustive_radius, plan.cap);
    const auto n = static_cast<std::uint64_t>(ball.size());
    if (n != 0 && n > plan.cap / n) throw ResourceError("defect: pair count exceeds the enumeration cap");
    for (const Word& g : ball)
      for (const Word& h : ball) fn(g, h);
  }
  Rng rng(derive_seed(plan.seed, "defect"));
  for (std::size_t i = 0; i < plan.random_pairs; ++i) {
    const auto lg = static_cast<std::size_t>(uniform_below(rng, plan.max_len + 1));
    const auto lh = static_cast<std::size_t>(uniform_below(rng, plan.max_len + 1));
    const Word g = sample_word(rank, lg, rng);
    Word h = sample_word(rank, lh, rng);
    if (i % 2 == 1) {
      const auto c = static_cast<std::size_t>(uniform_below(rng, g.size() + 1));
      h = multiply(invert(g.suffix(c)), h);
    }
    fn(g, h);
  }
}

inline DefectStats defect_sup(const QuasiMorphism& q, const DefectPlan& plan) {
  DefectStats stats;
  for_each_defect_pair(q.rank(), plan, [&](const Word& g, const Word& h) {
    ++stats.count;
    const Rational d = abs(defect(q, g, h));
    if (!stats.argmax || d > stats.max_abs) {
      stats.max_abs = d;
      stats.argmax = std::make_pair(g, h);
    }
  });
  return stats;
}

}  // namespace massey
