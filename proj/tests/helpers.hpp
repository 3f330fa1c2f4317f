#pragma once

#include "distlab/generators.hpp"
#include "distlab/matching.hpp"

namespace testutil {

inline distlab::PreferenceProfile fig1() {
  return distlab::adversarial_profile(distlab::AdversarialProfile::Figure1, 4);
}

inline distlab::PreferenceProfile fig2() {
  return distlab::adversarial_profile(distlab::AdversarialProfile::Figure2, 4);
}

inline distlab::PreferenceProfile cyclic(int n) {
  return distlab::adversarial_profile(distlab::AdversarialProfile::CyclicShift, n);
}

inline distlab::PreferenceProfile revcyclic(int n) {
  return distlab::adversarial_profile(distlab::AdversarialProfile::ReverseCyclicShift, n);
}

inline distlab::Instance fig2_with(distlab::AdversarialValuation kind) {
  auto prefs = fig2();
  auto values = distlab::adversarial_valuation(kind, prefs);
  return distlab::validate_instance(prefs, std::move(values));
}

inline distlab::PreferenceProfile ic_profile(int n, distlab::Seed seed) {
  return distlab::gen_culture(distlab::CultureSpec{}, n, seed);
}

inline distlab::Instance random_instance(int n, distlab::Seed seed,
                                         distlab::ValueDist dist = distlab::ValueDist::Uniform01) {
  return distlab::fit_values(ic_profile(n, seed), dist, seed);
}

// Two independent 2x2 sub-markets, each with one rotation: the rotation poset
// is a 2-element antichain and there are 4 stable matchings.
inline distlab::PreferenceProfile antichain_profile() {
  distlab::PreferenceProfile prefs;
  prefs.n = 4;
  prefs.men_ranks = {{0, 1, 2, 3}, {1, 0, 2, 3}, {2, 3, 0, 1}, {3, 2, 0, 1}};
  prefs.women_ranks = {{1, 0, 2, 3}, {0, 1, 2, 3}, {3, 2, 0, 1}, {2, 3, 0, 1}};
  prefs.freeze();
  return prefs;
}

}  // namespace testutil
