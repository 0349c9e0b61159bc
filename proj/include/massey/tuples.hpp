#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "massey/errors.hpp"
#include "massey/freegroup.hpp"
#include "massey/random.hpp"

namespace massey {

using Tuple = std::vector<Word>;

inline std::string tuple_to_string(std::span<const Word> t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ", ";
    s += t[i].to_string();
  }
  return s + ")";
}

// Membership in B^k: every entry nontrivial and every adjacent product
// g_i g_{i+1} a reduced concatenation. The empty tuple is aligned.
inline bool is_aligned(std::span<const Word> t) {
  for (const Word& w : t)
    if (w.empty()) return false;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (t[i].back().cancels(t[i + 1].front())) return false;
  return true;
}

// All aligned tuples of a fixed arity whose entries lie in the ball of
// `entry_radius` and whose entries have at most `total_length` letters in
// total (negative: no total bound).
struct AlignedDomain {
  int rank = 2;
  int arity = 1;
  int entry_radius = 2;
  int total_length = -1;

  int effective_total() const {
    return total_length < 0 ? arity * entry_radius : std::min(total_length, arity * entry_radius);
  }
};

// Exact size of an AlignedDomain. A length-l entry has 2n(2n-1)^(l-1)
// choices when first and (2n-1)^l choices after a fixed previous letter,
// so only the entry-length profile matters.
inline std::uint64_t count_aligned_tuples(const AlignedDomain& d) {
  validate_rank(d.rank);
  if (d.arity < 0 || d.entry_radius < 0) throw UsageError("aligned domain: negative arity or radius");
  if (d.arity == 0) return 1;
  const int total = d.effective_total();
  const long double branch = 2.0L * d.rank - 1;
  // ways[l] = weighted count of prefixes with l letters so far.
  std::vector<long double> ways(static_cast<std::size_t>(total) + 1, 0.0L);
  for (int l = 1; l <= std::min(d.entry_radius, total); ++l) {
    long double w = 2.0L * d.rank;
    for (int i = 1; i < l; ++i) w *= branch;
    ways[static_cast<std::size_t>(l)] = w;
  }
  for (int k = 1; k < d.arity; ++k) {
    std::vector<long double> next(ways.size(), 0.0L);
    for (int l = 0; l <= total; ++l) {
      if (ways[static_cast<std::size_t>(l)] == 0) continue;
      long double w = 1;
      for (int e = 1; e <= d.entry_radius && l + e <= total; ++e) {
        w *= branch;
        next[static_cast<std::size_t>(l + e)] += ways[static_cast<std::size_t>(l)] * w;
      }
    }
    ways = std::move(next);
  }
  long double sum = 0;
  for (long double w : ways) sum += w;
  return sum >= 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(sum + 0.5L);
}

// Depth-first enumeration in lexicographic order of entries (each entry in
// shortlex order). Throws ResourceError if the domain exceeds `cap`.
template <class Fn>
void for_each_aligned_tuple(const AlignedDomain& d, std::uint64_t cap, Fn&& fn) {
  const std::uint64_t count = count_aligned_tuples(d);
  if (count > cap)
    throw ResourceError("aligned domain of arity " + std::to_string(d.arity) + " has " + std::to_string(count) +
                        " tuples, above the enumeration cap " + std::to_string(cap));
  std::vector<Word> entries;
  for_each_in_ball(d.rank, d.entry_radius, cap, [&](const Word& w) {
    if (!w.empty()) entries.push_back(w);
  });
  const int total = d.effective_total();
  Tuple t;
  t.reserve(static_cast<std::size_t>(d.arity));
  auto recurse = [&](auto&& self, int remaining) -> void {
    if (static_cast<int>(t.size()) == d.arity) {
      fn(std::span<const Word>(t));
      return;
    }
    const int slots_after = d.arity - static_cast<int>(t.size()) - 1;
    for (const Word& w : entries) {
      if (static_cast<int>(w.size()) + slots_after > remaining) break;  // shortlex: lengths non-decreasing
      if (!t.empty() && t.back().back().cancels(w.front())) continue;
      t.push_back(w);
      self(self, remaining - static_cast<int>(w.size()));
      t.pop_back();
    }
  };
  recurse(recurse, total);
}

// Random aligned tuple: entry lengths uniform in [1, max_len], each entry a
// uniform non-backtracking walk whose first letter does not cancel the
// previous entry's last letter.
inline Tuple sample_aligned_tuple(Rng& rng, int rank, int arity, std::size_t max_len) {
  if (max_len < 1) throw UsageError("sample_aligned_tuple: max_len must be >= 1");
  Tuple t;
  t.reserve(static_cast<std::size_t>(arity));
  for (int i = 0; i < arity; ++i) {
    const auto len = static_cast<std::size_t>(uniform_between(rng, 1, static_cast<std::int64_t>(max_len)));
    Letter forbidden;
    const Letter* avoid = nullptr;
    if (!t.empty()) {
      forbidden = t.back().back().inverse();
      avoid = &forbidden;
    }
    t.push_back(sample_word_after(rank, len, rng, avoid));
  }
  return t;
}

}  // namespace massey
