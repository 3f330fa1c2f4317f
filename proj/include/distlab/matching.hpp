#pragma once

#include "distlab/core.hpp"

namespace distlab {

enum class Side { MenPropose, WomenPropose };

struct BlockingPair {
  AgentId man;
  AgentId woman;
  friend bool operator==(const BlockingPair&, const BlockingPair&) = default;
};

// Gale-Shapley deferred acceptance. MenPropose yields the man-optimal stable
// matching, WomenPropose the woman-optimal one.
Matching deferred_acceptance(const PreferenceProfile& prefs, Side side);

std::vector<BlockingPair> blocking_pairs(const Matching& mu, const PreferenceProfile& prefs);
bool is_stable(const Matching& mu, const PreferenceProfile& prefs);

// All stable matchings by exhaustive search; n <= 9 (throws TooLarge above).
// Sorted lexicographically on man_to_woman.
std::vector<Matching> enumerate_stable_bruteforce(const PreferenceProfile& prefs);

}  // namespace distlab
