#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "massey/cochain.hpp"
#include "massey/random.hpp"
#include "massey/report.hpp"
#include "massey/tuples.hpp"

namespace massey {

// A pointwise check returns nullopt on success or a description of the
// failing values; the tuple itself is added by the driver.
using PointCheck = std::function<std::optional<nlohmann::json>(std::span<const Word>, EvalContext&)>;

inline std::optional<nlohmann::json> expect_equal(const Rational& lhs, const Rational& rhs) {
  if (lhs == rhs) return std::nullopt;
  return nlohmann::json{{"lhs", lhs.to_string()}, {"rhs", rhs.to_string()}};
}

inline nlohmann::json tuple_json(std::span<const Word> t) {
  nlohmann::json out = nlohmann::json::array();
  for (const Word& w : t) out.push_back(w.to_string());
  return out;
}

struct TupleDomain {
  AlignedDomain exhaustive;
  bool use_exhaustive = true;
  std::size_t random_count = 0;
  std::size_t max_len = 50;
  std::uint64_t seed = 1;
  std::string stream;  // seed tag; distinct stages draw distinct tuples
  std::uint64_t cap = kDefaultEnumerationCap;
};

namespace detail {

struct BatchResult {
  std::uint64_t violations = 0;
  std::optional<std::size_t> first_index;
  std::optional<nlohmann::json> first_detail;
  EvalContext ctx;
};

inline BatchResult run_slice(const std::vector<Tuple>& batch, std::size_t lo, std::size_t hi, const PointCheck& check) {
  BatchResult r;
  for (std::size_t i = lo; i < hi; ++i) {
    const std::uint64_t misaligned_before = r.ctx.misaligned_zeros;
    auto bad = check(batch[i], r.ctx);
    // Inputs are aligned and faces of aligned tuples are aligned, so any
    // misaligned sub-evaluation means a face map or z-product went wrong.
    if (!bad && r.ctx.misaligned_zeros != misaligned_before)
      bad = nlohmann::json{{"problem", "misaligned sub-evaluation of an aligned input"}};
    if (!bad) continue;
    ++r.violations;
    if (!r.first_index) {
      r.first_index = i;
      r.first_detail = std::move(bad);
    }
  }
  return r;
}

}  // namespace detail

// Runs `check` on every tuple of the domain. Tuples are produced serially in
// a fixed order and checked in batches, split evenly over `jobs` threads;
// the reported counterexample is always the earliest failing tuple, so the
// outcome does not depend on the thread count.
inline StageRecord check_pointwise(const std::string& name, const TupleDomain& domain, const PointCheck& check,
                                   int jobs = 1) {
  StageRecord rec;
  rec.name = name;
  const std::size_t batch_size = 2048;
  std::vector<Tuple> batch;
  batch.reserve(batch_size);
  std::uint64_t identity_zeros = 0, misaligned_zeros = 0, exhaustive_count = 0;

  auto flush = [&] {
    if (batch.empty()) return;
    const std::size_t n = batch.size();
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), (n + 63) / 64);
    std::vector<detail::BatchResult> parts(workers);
    if (workers <= 1) {
      parts[0] = detail::run_slice(batch, 0, n, check);
    } else {
      std::vector<std::thread> threads;
      for (std::size_t w = 0; w < workers; ++w)
        threads.emplace_back([&, w] { parts[w] = detail::run_slice(batch, n * w / workers, n * (w + 1) / workers, check); });
      for (auto& t : threads) t.join();
    }
    for (auto& p : parts) {
      rec.violations += p.violations;
      identity_zeros += p.ctx.identity_zeros;
      misaligned_zeros += p.ctx.misaligned_zeros;
      if (!rec.counterexample && p.first_index) {
        nlohmann::json ce = *p.first_detail;
        ce["tuple"] = tuple_json(batch[*p.first_index]);
        rec.counterexample = std::move(ce);
      }
    }
    rec.checked += n;
    batch.clear();
  };

  if (domain.use_exhaustive) {
    for_each_aligned_tuple(domain.exhaustive, domain.cap, [&](std::span<const Word> t) {
      batch.emplace_back(t.begin(), t.end());
      ++exhaustive_count;
      if (batch.size() == batch_size) flush();
    });
  }
  Rng rng(derive_seed(domain.seed, domain.stream.empty() ? name : domain.stream));
  for (std::size_t i = 0; i < domain.random_count; ++i) {
    batch.push_back(sample_aligned_tuple(rng, domain.exhaustive.rank, domain.exhaustive.arity, domain.max_len));
    if (batch.size() == batch_size) flush();
  }
  flush();

  rec.passed = rec.violations == 0;
  rec.stats = {{"arity", domain.exhaustive.arity},
               {"exhaustive_tuples", exhaustive_count},
               {"exhaustive_entry_radius", domain.use_exhaustive ? domain.exhaustive.entry_radius : -1},
               {"exhaustive_total_length", domain.use_exhaustive ? domain.exhaustive.effective_total() : -1},
               {"random_tuples", domain.random_count},
               {"random_max_len", domain.max_len},
               {"extension_by_zero", {{"identity", identity_zeros}, {"misaligned", misaligned_zeros}}}};
  return rec;
}

}  // namespace massey
