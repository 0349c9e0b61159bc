#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "massey/errors.hpp"
#include "massey/random.hpp"

namespace massey {

inline constexpr int kMaxRank = 26;

inline void validate_rank(int rank) {
  if (rank < 1 || rank > kMaxRank)
    throw ConfigError("rank " + std::to_string(rank) + " out of range [1, " + std::to_string(kMaxRank) + "]");
}

// A generator a_i (sign +1) or its formal inverse (sign -1), stored as +-i.
class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(int generator, int sign) : code_(static_cast<std::int8_t>(sign < 0 ? -generator : generator)) {}

  static constexpr Letter from_code(int code) {
    Letter l;
    l.code_ = static_cast<std::int8_t>(code);
    return l;
  }

  constexpr int generator() const { return code_ < 0 ? -code_ : code_; }
  constexpr int sign() const { return code_ < 0 ? -1 : 1; }
  constexpr int code() const { return code_; }
  constexpr Letter inverse() const { return from_code(-code_); }
  constexpr bool cancels(Letter other) const { return code_ == -other.code_; }

  // Position in the alphabet a, A, b, B, ... (0-based).
  constexpr int index() const { return 2 * (generator() - 1) + (code_ < 0 ? 1 : 0); }
  static constexpr Letter from_index(int index) { return Letter(index / 2 + 1, index % 2 == 0 ? 1 : -1); }

  char symbol() const { return static_cast<char>((code_ < 0 ? 'A' : 'a') + generator() - 1); }

  friend constexpr bool operator==(Letter, Letter) = default;
  friend constexpr auto operator<=>(Letter a, Letter b) { return a.index() <=> b.index(); }

 private:
  std::int8_t code_ = 1;
};

class Word;
Word reduce(std::span<const Letter> raw, int rank);

// A reduced word of F_n. Every constructor reduces, so the letter sequence
// never contains an adjacent pair x x^-1. The empty word is the identity.
class Word {
 public:
  explicit Word(int rank = 2) : rank_(rank) { validate_rank(rank); }

  int rank() const { return rank_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  bool is_identity() const { return letters_.empty(); }

  std::span<const Letter> letters() const { return letters_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const {
    if (letters_.empty()) throw UsageError("front() of the identity");
    return letters_.front();
  }
  Letter back() const {
    if (letters_.empty()) throw UsageError("back() of the identity");
    return letters_.back();
  }

  // Subwords of a reduced word are reduced; no re-reduction needed.
  Word subword(std::size_t pos, std::size_t len) const {
    Word w(rank_, Trusted{});
    w.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                      letters_.begin() + static_cast<std::ptrdiff_t>(pos + len));
    return w;
  }
  Word prefix(std::size_t n) const { return subword(0, n); }
  Word suffix(std::size_t n) const { return subword(size() - n, n); }

  // Canonical text: lower case for generators, upper case for inverses, "1" for the identity.
  std::string to_string() const {
    if (letters_.empty()) return "1";
    std::string s;
    s.reserve(letters_.size());
    for (Letter l : letters_) s.push_back(l.symbol());
    return s;
  }

  // Accepts "1", letters a..z (upper case = inverse), "x^k" for any nonzero
  // integer k, and whitespace between tokens.
  static Word parse(std::string_view text, int rank) {
    validate_rank(rank);
    std::vector<Letter> raw;
    std::size_t i = 0;
    bool saw_identity = false;
    auto fail = [&](const std::string& why) {
      throw ConfigError("malformed word '" + std::string(text) + "': " + why);
    };
    while (i < text.size()) {
      char c = text[i];
      if (c == ' ' || c == '\t' || c == '*' || c == '.') {
        ++i;
        continue;
      }
      if (c == '1') {
        saw_identity = true;
        ++i;
        continue;
      }
      int gen;
      int sign;
      if (c >= 'a' && c <= 'z') {
        gen = c - 'a' + 1;
        sign = 1;
      } else if (c >= 'A' && c <= 'Z') {
        gen = c - 'A' + 1;
        sign = -1;
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
      if (gen > rank) fail(std::string("generator '") + c + "' exceeds rank " + std::to_string(rank));
      ++i;
      long long exponent = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        std::size_t start = i;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
        std::size_t digits = i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
        if (i == digits) fail("missing exponent");
        exponent = std::stoll(std::string(text.substr(start, i - start)));
        if (exponent == 0 || exponent > 100000 || exponent < -100000) fail("exponent out of range");
      }
      Letter l(gen, exponent < 0 ? -sign : sign);
      for (long long k = 0; k < (exponent < 0 ? -exponent : exponent); ++k) raw.push_back(l);
    }
    if (saw_identity && !raw.empty()) fail("'1' mixed with letters");
    return reduce(raw, rank);
  }

  friend bool operator==(const Word& a, const Word& b) { return a.rank_ == b.rank_ && a.letters_ == b.letters_; }
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.rank_ <=> b.rank_; c != 0) return c;
    if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                                  b.letters_.end());
  }

  std::size_t hash() const {
    std::size_t h = static_cast<std::size_t>(rank_) * 1315423911u;
    for (Letter l : letters_) h = h * 131 + static_cast<std::size_t>(l.code() + 64);
    return h;
  }

 private:
  struct Trusted {};
  Word(int rank, Trusted) : rank_(rank) {}

  int rank_;
  std::vector<Letter> letters_;

  friend Word reduce(std::span<const Letter> raw, int rank);
  friend Word multiply(const Word& g, const Word& h);
  friend Word invert(const Word& g);
  template <class Fn>
  friend void for_each_in_ball(int rank, int radius, std::uint64_t cap, Fn&& fn);
  friend Word sample_word_after(int rank, std::size_t length, Rng& rng, const Letter* forbidden_first);
};

// Free reduction with a stack; letters must lie within rank.
inline Word reduce(std::span<const Letter> raw, int rank) {
  validate_rank(rank);
  Word w(rank, Word::Trusted{});
  w.letters_.reserve(raw.size());
  for (Letter l : raw) {
    if (l.code() == 0 || l.generator() > rank)
      throw ConfigError("letter generator " + std::to_string(l.generator()) + " out of range for rank " +
                        std::to_string(rank));
    if (!w.letters_.empty() && w.letters_.back().cancels(l))
      w.letters_.pop_back();
    else
      w.letters_.push_back(l);
  }
  return w;
}

inline void require_same_rank(const Word& g, const Word& h) {
  if (g.rank() != h.rank())
    throw UsageError("rank mismatch: " + std::to_string(g.rank()) + " vs " + std::to_string(h.rank()));
}

// Number of letters cancelled at the junction of g.h.
inline std::size_t cancellation_length(const Word& g, const Word& h) {
  auto gl = g.letters();
  auto hl = h.letters();
  std::size_t t = 0;
  const std::size_t limit = std::min(gl.size(), hl.size());
  while (t < limit && gl[gl.size() - 1 - t].cancels(hl[t])) ++t;
  return t;
}

inline Word multiply(const Word& g, const Word& h) {
  require_same_rank(g, h);
  const std::size_t t = cancellation_length(g, h);
  Word w(g.rank(), Word::Trusted{});
  w.letters_.reserve(g.size() + h.size() - 2 * t);
  w.letters_.insert(w.letters_.end(), g.letters_.begin(), g.letters_.end() - static_cast<std::ptrdiff_t>(t));
  w.letters_.insert(w.letters_.end(), h.letters_.begin() + static_cast<std::ptrdiff_t>(t), h.letters_.end());
  return w;
}

inline Word invert(const Word& g) {
  Word w(g.rank(), Word::Trusted{});
  w.letters_.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) w.letters_[i] = g.letters_[g.size() - 1 - i].inverse();
  return w;
}

// True iff g.h involves no cancellation.
inline bool concatenates_reduced(const Word& g, const Word& h) {
  return g.empty() || h.empty() || !g.back().cancels(h.front());
}

// The tripod of the geodesic triangle (1, g, gh) in the Cayley tree:
// g = prefix.cancelled, h = cancelled^-1.suffix, gh = prefix.suffix.
struct ProductSplit {
  Word prefix;
  Word cancelled;
  Word suffix;
};

inline ProductSplit split_product(const Word& g, const Word& h) {
  require_same_rank(g, h);
  const std::size_t t = cancellation_length(g, h);
  return {g.prefix(g.size() - t), g.suffix(t), h.suffix(h.size() - t)};
}

// Number of reduced words of length <= radius in F_rank, saturating at UINT64_MAX.
inline std::uint64_t ball_size(int rank, int radius) {
  validate_rank(rank);
  if (radius < 0) throw UsageError("negative radius");
  std::uint64_t total = 1;
  std::uint64_t sphere = 2 * static_cast<std::uint64_t>(rank);
  for (int len = 1; len <= radius; ++len) {
    if (total > UINT64_MAX - sphere) return UINT64_MAX;
    total += sphere;
    const std::uint64_t branch = 2 * static_cast<std::uint64_t>(rank) - 1;
    if (branch != 0 && sphere > UINT64_MAX / branch) {
      sphere = UINT64_MAX;
    } else {
      sphere *= branch;
    }
  }
  return total;
}

inline constexpr std::uint64_t kDefaultEnumerationCap = 50'000'000;

// Visits every reduced word of length <= radius exactly once, in shortlex
// order (alphabet a < A < b < B < ...). Throws ResourceError when the ball
// holds more than `cap` words.
template <class Fn>
void for_each_in_ball(int rank, int radius, std::uint64_t cap, Fn&& fn) {
  const std::uint64_t count = ball_size(rank, radius);
  if (count > cap)
    throw ResourceError("ball of radius " + std::to_string(radius) + " in F_" + std::to_string(rank) + " has " +
                        std::to_string(count) + " words, above the enumeration cap " + std::to_string(cap));
  const int alphabet = 2 * rank;
  Word w(rank, Word::Trusted{});
  fn(static_cast<const Word&>(w));
  for (int len = 1; len <= radius; ++len) {
    // Odometer over reduced words of exactly `len` letters.
    std::vector<int> digits(static_cast<std::size_t>(len), 0);
    auto first_valid = [&](int pos, int start) {
      int d = start;
      while (d < alphabet && pos > 0 && Letter::from_index(d).cancels(Letter::from_index(digits[pos - 1]))) ++d;
      return d;
    };
    for (int p = 0; p < len; ++p) digits[p] = first_valid(p, 0);
    while (true) {
      w.letters_.resize(static_cast<std::size_t>(len));
      for (int p = 0; p < len; ++p) w.letters_[p] = Letter::from_index(digits[p]);
      fn(static_cast<const Word&>(w));
      int p = len - 1;
      while (p >= 0) {
        int d = first_valid(p, digits[p] + 1);
        if (d < alphabet) {
          digits[p] = d;
          for (int q = p + 1; q < len; ++q) digits[q] = first_valid(q, 0);
          break;
        }
        --p;
      }
      if (p < 0) break;
    }
  }
}

inline std::vector<Word> enumerate_ball(int rank, int radius, std::uint64_t cap = kDefaultEnumerationCap) {
  std::vector<Word> out;
  for_each_in_ball(rank, radius, cap, [&](const Word& w) { out.push_back(w); });
  return out;
}

// Uniform non-backtracking walk of exactly `length` steps whose first step
// avoids *forbidden_first (when given).
inline Word sample_word_after(int rank, std::size_t length, Rng& rng, const Letter* forbidden_first) {
  validate_rank(rank);
  Word w(rank, Word::Trusted{});
  w.letters_.reserve(length);
  const std::uint64_t alphabet = 2 * static_cast<std::uint64_t>(rank);
  for (std::size_t i = 0; i < length; ++i) {
    const Letter* avoid = nullptr;
    Letter prev_inv;
    if (i > 0) {
      prev_inv = w.letters_.back().inverse();
      avoid = &prev_inv;
    } else if (forbidden_first != nullptr) {
      avoid = forbidden_first;
    }
    Letter next;
    if (avoid == nullptr) {
      next = Letter::from_index(static_cast<int>(uniform_below(rng, alphabet)));
    } else {
      int d = static_cast<int>(uniform_below(rng, alphabet - 1));
      if (d >= avoid->index()) ++d;
      next = Letter::from_index(d);
    }
    w.letters_.push_back(next);
  }
  return w;
}

inline Word sample_word(int rank, std::size_t length, Rng& rng) { return sample_word_after(rank, length, rng, nullptr); }

inline Word sample_word(int rank, std::size_t length, std::uint64_t seed) {
  Rng rng(seed);
  return sample_word(rank, length, rng);
}

}  // namespace massey

template <>
struct std::hash<massey::Word> {
  std::size_t operator()(const massey::Word& w) const noexcept { return w.hash(); }
};
