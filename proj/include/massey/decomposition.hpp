#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "massey/errors.hpp"
#include "massey/freegroup.hpp"

namespace massey {

// True iff occurrences of w and w^-1 in any reduced word are pairwise
// disjoint: w != w^-1, and no proper suffix of w (resp. w^-1) coincides with
// a prefix of w or w^-1 of the same length.
inline bool is_non_self_overlapping(const Word& w) {
  if (w.empty()) throw UsageError("is_non_self_overlapping: empty word");
  const Word winv = invert(w);
  if (w == winv) return false;
  const std::size_t n = w.size();
  for (std::size_t i = 1; i < n; ++i) {
    const Word suffix = w.suffix(i);
    if (suffix == w.prefix(i) || suffix == winv.prefix(i) || winv.suffix(i) == w.prefix(i)) return false;
  }
  return true;
}

enum class Family { Letter, Rolli, Brooks };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Letter:
      return "letter";
    case Family::Rolli:
      return "rolli";
    case Family::Brooks:
      return "brooks";
  }
  return "?";
}

// One of the three concrete decompositions of F_n into pieces.
//   Letter:    every letter is a piece.
//   Rolli:     maximal blocks a_i^k (k != 0) of a single generator.
//   Brooks(w): the occurrences of w and w^-1, every other letter on its own.
class DecompositionSpec {
 public:
  static DecompositionSpec letter(int rank) { return DecompositionSpec(Family::Letter, Word(rank)); }
  static DecompositionSpec rolli(int rank) { return DecompositionSpec(Family::Rolli, Word(rank)); }
  static DecompositionSpec brooks(const Word& w) {
    if (w.empty()) throw ConfigError("Brooks word must be nonempty");
    if (!is_non_self_overlapping(w)) throw ConfigError("Brooks word '" + w.to_string() + "' is self-overlapping");
    return DecompositionSpec(Family::Brooks, w);
  }

  Family family() const { return family_; }
  int rank() const { return word_.rank(); }
  const Word& brooks_word() const { return word_; }
  const Word& brooks_inverse() const { return word_inverse_; }

  std::string describe() const {
    if (family_ == Family::Brooks) return "brooks(" + word_.to_string() + ")";
    return family_name(family_);
  }

  // Membership in the piece set of this decomposition.
  bool is_piece(const Word& p) const {
    if (p.rank() != rank() || p.empty()) return false;
    switch (family_) {
      case Family::Letter:
        return p.size() == 1;
      case Family::Rolli:
        return std::all_of(p.letters().begin(), p.letters().end(), [&](Letter l) { return l == p.front(); });
      case Family::Brooks:
        return p.size() == 1 || p == word_ || p == word_inverse_;
    }
    return false;
  }

  friend bool operator==(const DecompositionSpec& a, const DecompositionSpec& b) {
    return a.family_ == b.family_ && a.word_ == b.word_;
  }

 private:
  DecompositionSpec(Family family, Word word) : family_(family), word_(std::move(word)), word_inverse_(invert(word_)) {}

  Family family_;
  Word word_;  // Brooks word; identity of the right rank otherwise
  Word word_inverse_;
};

// Piece boundaries of Delta(g): cuts[0] = 0 < cuts[1] < ... < cuts[m] = |g|.
using PieceBounds = std::vector<std::uint32_t>;

namespace detail {

inline bool matches_at(std::span<const Letter> text, std::size_t pos, std::span<const Letter> pattern) {
  if (pos + pattern.size() > text.size()) return false;
  return std::equal(pattern.begin(), pattern.end(), text.begin() + static_cast<std::ptrdiff_t>(pos));
}

}  // namespace detail

inline PieceBounds piece_bounds(const DecompositionSpec& spec, const Word& g) {
  if (g.rank() != spec.rank())
    throw UsageError("decompose: word of rank " + std::to_string(g.rank()) + " under a rank-" +
                     std::to_string(spec.rank()) + " decomposition");
  const auto letters = g.letters();
  const std::size_t n = letters.size();
  PieceBounds cuts;
  cuts.reserve(n + 1);
  cuts.push_back(0);
  switch (spec.family()) {
    case Family::Letter:
      for (std::size_t i = 1; i <= n; ++i) cuts.push_back(static_cast<std::uint32_t>(i));
      break;
    case Family::Rolli:
      for (std::size_t i = 1; i <= n; ++i)
        if (i == n || letters[i].generator() != letters[i - 1].generator()) cuts.push_back(static_cast<std::uint32_t>(i));
      break;
    case Family::Brooks: {
      // Mark every occurrence of w^{+-1} first; non-self-overlap makes them
      // pairwise disjoint, so the marking is canonical.
      const auto w = spec.brooks_word().letters();
      const auto winv = spec.brooks_inverse().letters();
      const std::size_t len = w.size();
      std::vector<bool> starts(n, false);
      for (std::size_t i = 0; i + len <= n; ++i)
        starts[i] = detail::matches_at(letters, i, w) || detail::matches_at(letters, i, winv);
      std::size_t i = 0;
      while (i < n) {
        i += starts[i] ? len : 1;
        cuts.push_back(static_cast<std::uint32_t>(i));
      }
      break;
    }
  }
  return cuts;
}

// Delta(g) as an explicit sequence of pieces.
class PieceSequence {
 public:
  PieceSequence() = default;
  explicit PieceSequence(std::vector<Word> pieces) : pieces_(std::move(pieces)) {}

  PieceSequence(const Word& g, const PieceBounds& cuts) {
    pieces_.reserve(cuts.size() - 1);
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) pieces_.push_back(g.subword(cuts[j], cuts[j + 1] - cuts[j]));
  }

  std::size_t size() const { return pieces_.size(); }
  bool empty() const { return pieces_.empty(); }
  const Word& operator[](std::size_t i) const { return pieces_[i]; }
  auto begin() const { return pieces_.begin(); }
  auto end() const { return pieces_.end(); }
  const std::vector<Word>& pieces() const { return pieces_; }

  // Letter-by-letter concatenation; requires no cancellation at junctions.
  Word product(int rank) const {
    std::vector<Letter> raw;
    for (const Word& p : pieces_) raw.insert(raw.end(), p.letters().begin(), p.letters().end());
    return reduce(raw, rank);
  }

  // Delta(g^-1) expected from Delta(g): reversed, each piece inverted.
  PieceSequence inverted() const {
    std::vector<Word> out;
    out.reserve(pieces_.size());
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) out.push_back(invert(*it));
    return PieceSequence(std::move(out));
  }

  PieceSequence slice(std::size_t first, std::size_t count) const {
    return PieceSequence(std::vector<Word>(pieces_.begin() + static_cast<std::ptrdiff_t>(first),
                                           pieces_.begin() + static_cast<std::ptrdiff_t>(first + count)));
  }

  PieceSequence& append(const PieceSequence& other) {
    pieces_.insert(pieces_.end(), other.pieces_.begin(), other.pieces_.end());
    return *this;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (i) s += ", ";
      s += pieces_[i].to_string();
    }
    return s + ")";
  }

  friend bool operator==(const PieceSequence&, const PieceSequence&) = default;

 private:
  std::vector<Word> pieces_;
};

inline PieceSequence decompose(const DecompositionSpec& spec, const Word& g) {
  return PieceSequence(g, piece_bounds(spec, g));
}

inline std::size_t decomposition_length(const DecompositionSpec& spec, const Word& g) {
  return piece_bounds(spec, g).size() - 1;
}

// z^<_j(g): product of the first j-1 pieces (1-based j).
inline Word prefix_product(const DecompositionSpec& spec, const Word& g, std::size_t j) {
  const PieceBounds cuts = piece_bounds(spec, g);
  const std::size_t m = cuts.size() - 1;
  if (j < 1 || j > m)
    throw UsageError("prefix_product: index " + std::to_string(j) + " outside [1, " + std::to_string(m) + "]");
  return g.prefix(cuts[j - 1]);
}

// z^>_j(g): product of the last N-j pieces (1-based j).
inline Word suffix_product(const DecompositionSpec& spec, const Word& g, std::size_t j) {
  const PieceBounds cuts = piece_bounds(spec, g);
  const std::size_t m = cuts.size() - 1;
  if (j < 1 || j > m)
    throw UsageError("suffix_product: index " + std::to_string(j) + " outside [1, " + std::to_string(m) + "]");
  return g.suffix(g.size() - cuts[j]);
}

// Corner and thick parts of the geodesic triangle (1, g, gh):
//   Delta(g)       = Delta(c1^-1) Delta(r1) Delta(c2)
//   Delta(h)       = Delta(c2^-1) Delta(r2) Delta(c3)
//   Delta((gh)^-1) = Delta(c3^-1) Delta(r3) Delta(c1)
struct TriangleDecomposition {
  Word c1, c2, c3;
  Word r1, r2, r3;
  std::array<std::size_t, 3> corner_lengths{};  // |Delta(c1)|, |Delta(c2)|, |Delta(c3)|
  std::array<std::size_t, 3> thick_lengths{};   // |Delta(r1)|, |Delta(r2)|, |Delta(r3)|

  std::size_t thick_total() const { return thick_lengths[0] + thick_lengths[1] + thick_lengths[2]; }
};

namespace detail {

// Longest run of leading pieces shared by two sides leaving the same vertex.
// `ends_a`/`ends_b` are piece end offsets measured from that vertex;
// `common` is the number of letters both sides share from it.
template <class EndA, class EndB>
std::size_t common_piece_run(std::size_t count_a, EndA ends_a, std::size_t count_b, EndB ends_b, std::size_t common) {
  std::size_t m = 0;
  while (m < count_a && m < count_b) {
    const std::size_t ea = ends_a(m);
    if (ea != ends_b(m) || ea > common) break;
    ++m;
  }
  return m;
}

inline std::size_t common_prefix_letters(std::span<const Letter> a, std::span<const Letter> b) {
  std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

inline std::size_t common_suffix_letters(std::span<const Letter> a, std::span<const Letter> b) {
  std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[a.size() - 1 - i] == b[b.size() - 1 - i]) ++i;
  return i;
}

}  // namespace detail

// Each c_i is the longest piece-aligned segment leaving its vertex along both
// adjacent sides; pieces on a shared segment coincide, so this is the
// maximal choice.
inline TriangleDecomposition triangle_split(const DecompositionSpec& spec, const Word& g, const Word& h) {
  require_same_rank(g, h);
  const Word gh = multiply(g, h);
  const PieceBounds cg = piece_bounds(spec, g);
  const PieceBounds ch = piece_bounds(spec, h);
  const PieceBounds cgh = piece_bounds(spec, gh);
  const std::size_t ng = cg.size() - 1, nh = ch.size() - 1, ngh = cgh.size() - 1;
  const std::size_t lg = g.size(), lh = h.size(), lgh = gh.size();

  // Vertex 1: sides g and gh, read forward.
  const std::size_t m1 =
      detail::common_piece_run(ng, [&](std::size_t i) { return std::size_t{cg[i + 1]}; }, ngh,
                               [&](std::size_t i) { return std::size_t{cgh[i + 1]}; },
                               detail::common_prefix_letters(g.letters(), gh.letters()));
  // Vertex g: sides g^-1 and h, i.e. g read backward and h read forward.
  const std::size_t m2 = detail::common_piece_run(
      ng, [&](std::size_t i) { return lg - std::size_t{cg[ng - 1 - i]}; }, nh,
      [&](std::size_t i) { return std::size_t{ch[i + 1]}; }, cancellation_length(g, h));
  // Vertex gh: sides h^-1 and (gh)^-1, i.e. h and gh read backward.
  const std::size_t m3 = detail::common_piece_run(
      nh, [&](std::size_t i) { return lh - std::size_t{ch[nh - 1 - i]}; }, ngh,
      [&](std::size_t i) { return lgh - std::size_t{cgh[ngh - 1 - i]}; },
      detail::common_suffix_letters(h.letters(), gh.letters()));

  TriangleDecomposition t;
  const std::size_t g_head = cg[m1], g_tail = cg[ng - m2];
  const std::size_t h_head = ch[m2], h_tail = ch[nh - m3];
  const std::size_t gh_head = cgh[m1], gh_tail = cgh[ngh - m3];
  t.c1 = invert(g.prefix(g_head));
  t.c2 = g.suffix(lg - g_tail);
  t.c3 = h.suffix(lh - h_tail);
  t.r1 = g.subword(g_head, g_tail - g_head);
  t.r2 = h.subword(h_head, h_tail - h_head);
  t.r3 = invert(gh.subword(gh_head, gh_tail - gh_head));
  t.corner_lengths = {m1, m2, m3};
  t.thick_lengths = {ng - m1 - m2, nh - m2 - m3, ngh - m1 - m3};
  return t;
}

struct AxiomResult {
  explicit AxiomResult(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  bool passed = true;
  std::uint64_t checked = 0;
  std::optional<std::string> counterexample;

  void fail(std::string witness) {
    if (passed) counterexample = std::move(witness);
    passed = false;
  }
};

struct AxiomReport {
  std::string spec;
  int radius = 0;
  int pair_radius = 0;
  std::vector<AxiomResult> axioms;
  std::size_t r_hat = 0;  // max |Delta(r_i)| over all pairs
  std::optional<std::pair<Word, Word>> r_hat_witness;

  bool passed() const {
    return std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return a.passed; });
  }
};

// Max |Delta(r_i)| over all pairs (g, h) in the ball of the given radius.
inline std::size_t measure_thick_constant(const DecompositionSpec& spec, int pair_radius,
                                          std::uint64_t cap = kDefaultEnumerationCap,
                                          std::optional<std::pair<Word, Word>>* witness = nullptr) {
  const std::vector<Word> ball = enumerate_ball(spec.rank(), pair_radius, cap);
  const auto n = static_cast<std::uint64_t>(ball.size());
  if (n != 0 && n > cap / n) throw ResourceError("pair enumeration exceeds the enumeration cap");
  std::size_t best = 0;
  for (const Word& g : ball)
    for (const Word& h : ball) {
      const TriangleDecomposition t = triangle_split(spec, g, h);
      const std::size_t m = *std::max_element(t.thick_lengths.begin(), t.thick_lengths.end());
      if (m > best || (witness != nullptr && !witness->has_value())) {
        best = std::max(best, m);
        if (witness != nullptr) *witness = std::make_pair(g, h);
      }
    }
  return best;
}

// Exhaustive check of the decomposition axioms:
//   (i)   the pieces multiply to g without cancellation, and are legal pieces;
//   (ii)  Delta(g^-1) is Delta(g) reversed and inverted;
//   (iii) every contiguous run of pieces decomposes to exactly that run;
//   (iv)  over all pairs of the pair ball, triangle_split satisfies its three
//         factorization identities; the max thick length is reported as R-hat.
inline AxiomReport check_axioms(const DecompositionSpec& spec, int radius, int pair_radius,
                                std::uint64_t cap = kDefaultEnumerationCap) {
  AxiomReport report;
  report.spec = spec.describe();
  report.radius = radius;
  report.pair_radius = pair_radius;
  AxiomResult product{"(i) product of pieces"};
  AxiomResult inverse{"(ii) inverse symmetry"};
  AxiomResult runs{"(iii) piece runs"};
  AxiomResult triangle{"(iv) triangle factorization"};
  const int rank = spec.rank();

  for_each_in_ball(rank, radius, cap, [&](const Word& g) {
    const PieceSequence d = decompose(spec, g);
    ++product.checked;
    bool legal = std::all_of(d.begin(), d.end(), [&](const Word& p) { return spec.is_piece(p); });
    std::size_t letters = 0;
    for (const Word& p : d) letters += p.size();
    if (!legal || letters != g.size() || d.product(rank) != g) product.fail("g=" + g.to_string() + " pieces " + d.to_string());

    ++inverse.checked;
    if (decompose(spec, invert(g)) != d.inverted()) inverse.fail("g=" + g.to_string());

    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = i; j < d.size(); ++j) {
        ++runs.checked;
        const PieceSequence run = d.slice(i, j - i + 1);
        if (decompose(spec, run.product(rank)) != run)
          runs.fail("g=" + g.to_string() + " run " + std::to_string(i + 1) + ".." + std::to_string(j + 1));
      }
  });

  const std::vector<Word> ball = enumerate_ball(rank, pair_radius, cap);
  const auto n = static_cast<std::uint64_t>(ball.size());
  if (n != 0 && n > cap / n) throw ResourceError("pair enumeration exceeds the enumeration cap");
  for (const Word& g : ball) {
    const PieceSequence dg = decompose(spec, g);
    for (const Word& h : ball) {
      ++triangle.checked;
      const TriangleDecomposition t = triangle_split(spec, g, h);
      const std::size_t m = *std::max_element(t.thick_lengths.begin(), t.thick_lengths.end());
      if (m > report.r_hat || !report.r_hat_witness) {
        report.r_hat = std::max(report.r_hat, m);
        report.r_hat_witness = std::make_pair(g, h);
      }
      const Word gh = multiply(g, h);
      PieceSequence side_g = decompose(spec, invert(t.c1));
      side_g.append(decompose(spec, t.r1)).append(decompose(spec, t.c2));
      PieceSequence side_h = decompose(spec, invert(t.c2));
      side_h.append(decompose(spec, t.r2)).append(decompose(spec, t.c3));
      PieceSequence side_gh = decompose(spec, invert(t.c3));
      side_gh.append(decompose(spec, t.r3)).append(decompose(spec, t.c1));
      if (side_g != dg || side_h != decompose(spec, h) || side_gh != decompose(spec, invert(gh)))
        triangle.fail("g=" + g.to_string() + " h=" + h.to_string());
    }
  }
  report.axioms = {product, inverse, runs, triangle};
  return report;
}

}  // namespace massey
