#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "massey/errors.hpp"
#include "massey/freegroup.hpp"
#include "massey/tuples.hpp"

namespace massey {

// Reproducible sampling plan shared by every verification stage.
//
// Exhaustive domains are aligned tuples with entries from the ball of
// `exhaustive_radius`, additionally capped in total letter count per arity
// (see total_length_for) so that high-arity identities stay tractable.
struct ExperimentPlan {
  int rank = 2;
  int exhaustive_radius = 4;
  std::map<int, int> total_length_by_arity;        // overrides of the default cap
  std::map<std::string, std::size_t> sample_counts;  // random tuples per stage
  std::size_t default_samples = 10000;
  std::size_t random_max_len = 50;
  std::vector<std::size_t> max_len_ladder{25, 50, 100, 200};
  std::size_t ladder_samples = 2000;
  int pair_radius = 6;  // ball used to measure R-hat
  std::uint64_t seed = 1;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  int jobs = 1;

  // Default cap on total letters: 10 letters for pairs, shrinking by one per
  // extra entry down to arity + 1.
  int total_length_for(int arity) const {
    if (auto it = total_length_by_arity.find(arity); it != total_length_by_arity.end()) return it->second;
    return std::max(arity + 1, 12 - arity);
  }

  std::size_t samples_for(const std::string& stage) const {
    auto it = sample_counts.find(stage);
    return it == sample_counts.end() ? default_samples : it->second;
  }

  AlignedDomain domain(int arity) const { return AlignedDomain{rank, arity, exhaustive_radius, total_length_for(arity)}; }

  void validate() const {
    validate_rank(rank);
    if (exhaustive_radius < 0) throw ConfigError("plan: exhaustive_radius must be >= 0");
    if (pair_radius < 0) throw ConfigError("plan: pair_radius must be >= 0");
    if (default_samples == 0 || ladder_samples == 0 || random_max_len == 0)
      throw ConfigError("plan: sample counts and lengths must be positive");
    for (const auto& [stage, n] : sample_counts)
      if (n == 0) throw ConfigError("plan: sample count for '" + stage + "' must be positive");
    if (max_len_ladder.empty()) throw ConfigError("plan: max_len ladder is empty");
    for (std::size_t i = 0; i < max_len_ladder.size(); ++i) {
      if (max_len_ladder[i] == 0) throw ConfigError("plan: ladder rungs must be positive");
      if (i > 0 && max_len_ladder[i] <= max_len_ladder[i - 1])
        throw ConfigError("plan: max_len ladder must be strictly increasing");
    }
    if (jobs < 1) throw ConfigError("plan: jobs must be >= 1");
    if (enumeration_cap == 0) throw ConfigError("plan: enumeration_cap must be positive");
  }
};

}  // namespace massey
