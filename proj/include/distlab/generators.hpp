#pragma once

#include <cstdint>
#include <random>

#include "distlab/core.hpp"
#include "distlab/query.hpp"

namespace distlab {

struct CultureSpec {
  enum class Kind { Attributes, IC, IC2, Mallows } kind = Kind::IC;
  int d = 2;              // Attributes
  double p = 0.25;        // IC2 partition fraction, in [0, 1/2]
  double norm_phi = 0.5;  // Mallows normalized dispersion, in [0, 1]

  static CultureSpec parse(const std::string& text);  // e.g. "mallows:normphi=0.5"
  std::string name() const;
};

enum class ValueDist { Uniform01, BetaHalfHalf, ExponentialRate1, SpikedUniform };

ValueDist parse_value_dist(const std::string& text);
std::string value_dist_name(ValueDist dist);

using Seed = std::uint64_t;

// Stable across runs; used to derive per-sample seeds.
Seed hash_seed(Seed seed, std::uint64_t a, std::uint64_t b);

PreferenceProfile gen_culture(const CultureSpec& spec, int n, Seed seed);

double sample_value(ValueDist dist, std::mt19937_64& rng);

// n i.i.d. draws per agent, sorted descending and assigned along the ranking.
Instance fit_values(const PreferenceProfile& prefs, ValueDist dist, Seed seed);

enum class AdversarialProfile { Figure1, Figure2, ReverseCyclicShift, CyclicShift };

PreferenceProfile adversarial_profile(AdversarialProfile kind, int n);

enum class AdversarialValuation { V1, V2, SelectiveIndifferent };

// V1/V2 require the Figure2 profile. SelectiveIndifferent takes a per-man
// selectivity assignment; each man's suitor (the woman ranking him first)
// gets the complementary role.
ValuationProfile adversarial_valuation(AdversarialValuation kind, const PreferenceProfile& prefs,
                                       const std::vector<bool>& selective_men = {});

// Mallows dispersion phi whose expected Kendall-tau distance is norm_phi times
// the maximum n(n-1)/4; exposed for tests.
double mallows_phi_from_norm(double norm_phi, int n);

}  // namespace distlab
