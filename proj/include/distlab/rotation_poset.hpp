#pragma once

#include <functional>
#include <set>
#include <utility>

#include "distlab/matching.hpp"

namespace distlab {

// Ordered cycle of matched pairs (m_i, w_i) such that w_{i+1} is the highest
// woman after w_i on m_i's list preferring m_i to her current partner.
struct Rotation {
  int id = -1;
  std::vector<std::pair<int, int>> pairs;  // (man, woman), k >= 2

  int size() const { return static_cast<int>(pairs.size()); }
  // Canonical form: rotate so the smallest man index comes first.
  std::vector<std::pair<int, int>> canonical_pairs() const;
};

struct RotationPoset {
  std::vector<Rotation> rotations;                 // all of R, ids 0..R-1
  std::set<std::pair<int, int>> precedence_edges;  // (pi, rho) meaning pi < rho
  std::set<std::pair<int, int>> hasse_edges;       // transitive reduction

  bool precedes(int pi, int rho) const { return precedence_edges.count({pi, rho}) > 0; }
};

struct ClosedSubset {
  std::vector<bool> members;

  int count() const;
  bool operator==(const ClosedSubset&) const = default;
  // Lexicographic order on the member bits, position 0 most significant.
  bool lex_less(const ClosedSubset& other) const;
};

// Rotations exposed in a stable matching; empty iff the matching is
// woman-optimal. Throws NotStable for unstable input.
std::vector<Rotation> find_exposed_rotations(const Matching& mu, const PreferenceProfile& prefs);

// Throws NotExposed unless the rotation is exposed in mu.
Matching eliminate_rotation(const Matching& mu, const Rotation& rho,
                            const PreferenceProfile& prefs);

RotationPoset build_rotation_poset(const PreferenceProfile& prefs);

void for_each_closed_subset(const RotationPoset& poset,
                            const std::function<void(const ClosedSubset&)>& fn);
std::vector<ClosedSubset> closed_subsets(const RotationPoset& poset);

bool is_closed(const RotationPoset& poset, const ClosedSubset& subset);

// Unique stable matching for a closed subset: empty set -> man-optimal,
// full set -> woman-optimal. Throws NotClosed.
Matching matching_from_closed_subset(const PreferenceProfile& prefs, const RotationPoset& poset,
                                     const ClosedSubset& subset);

// Union of pairs over all stable matchings.
std::set<std::pair<int, int>> stable_pairs(const PreferenceProfile& prefs);

// DOT rendering of the Hasse diagram; node labels list the rotation pairs.
std::string poset_to_dot(const RotationPoset& poset);

}  // namespace distlab
