#pragma once

#include "distlab/query.hpp"
#include "distlab/rotation_poset.hpp"

namespace distlab {

struct TsfConfig {
  double epsilon = 1.0;
  int lambda = 0;
  std::vector<double> thresholds;  // t_1..t_lambda, strictly decreasing

  static TsfConfig make(double epsilon);
};

struct HassePathConfig {
  double epsilon = 1.0;
  int k = 1;

  static HassePathConfig make(double epsilon);
};

// Uniform coin over the man- and woman-optimal stable matchings.
RandomizedMatching rand_mowo(const PreferenceProfile& prefs);

// One value query per agent: each man asked about his man-optimal partner,
// each woman about her woman-optimal partner; returns whichever of the two
// matchings has the larger revealed welfare (ties to the man-optimal one).
Matching one_query_mowo(const PreferenceProfile& prefs, ValueOracle& oracle,
                        QueryLedger& ledger);

// Threshold simulation over stable partners: per-agent binary searches place
// every stable partner into a geometric value bucket; the output is the
// optimal stable matching under the simulated (rounded-down) values.
Matching stable_tsf(const PreferenceProfile& prefs, ValueOracle& oracle, double epsilon,
                    QueryLedger& ledger);

// Largest index whose side-welfare is >= SW_side(matchings[target]) / (1+eps).
// `matchings` must have non-increasing side-welfare (the elimination sequence
// for the man side, its reverse for the woman side).
int poset_search(const std::vector<Matching>& matchings, int target_index, AgentSide side,
                 double epsilon, ValueOracle& oracle, QueryLedger& ledger);

bool is_hasse_path(const RotationPoset& poset);

// Requires a path-shaped Hasse diagram (throws NotAPath otherwise).
Matching hasse_path(const PreferenceProfile& prefs, ValueOracle& oracle, double epsilon,
                    QueryLedger& ledger);

// The full elimination sequence mu_0..mu_z for a path-shaped poset.
std::vector<Matching> elimination_sequence(const PreferenceProfile& prefs,
                                           const RotationPoset& poset);

struct Distortion {
  bool infinite = false;
  double ratio = 1.0;
};

Distortion distortion_ratio(double opt_welfare, double alg_welfare);
std::string distortion_to_string(const Distortion& d);

// Registry names: da_men, da_women, rand_mowo, one_mowo, stable_tsf,
// hasse_path, opt.
const std::vector<std::string>& algorithm_names();
bool is_known_algorithm(const std::string& name);

struct AlgorithmRun {
  double welfare = 0.0;  // expected welfare for randomized algorithms
  std::optional<Matching> matching;
  int max_queries = 0;
};

// Runs a registered algorithm against the instance with a fresh ledger.
// epsilon is required by stable_tsf and hasse_path only.
AlgorithmRun run_algorithm(const std::string& name, const Instance& inst,
                           std::optional<double> epsilon = std::nullopt);

}  // namespace distlab
