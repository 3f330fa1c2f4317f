#include "distlab/algorithms.hpp"

#include <algorithm>
#include <cmath>

#include "distlab/welfare_opt.hpp"

namespace distlab {

TsfConfig TsfConfig::make(double epsilon) {
  if (epsilon <= 0.0 || epsilon > 1.0) throw Error("BadParam", "epsilon must be in (0, 1]");
  TsfConfig cfg;
  cfg.epsilon = epsilon;
  cfg.lambda = static_cast<int>(std::ceil(4.0 * std::log(1.0 / epsilon) / epsilon));
  for (int l = 1; l <= cfg.lambda; ++l)
    cfg.thresholds.push_back(std::pow(epsilon, static_cast<double>(l) / cfg.lambda) / 4.0);
  return cfg;
}

HassePathConfig HassePathConfig::make(double epsilon) {
  if (epsilon <= 0.0) throw Error("BadParam", "epsilon must be positive");
  HassePathConfig cfg;
  cfg.epsilon = epsilon;
  cfg.k = std::max(1, static_cast<int>(std::ceil(2.0 / std::log2(1.0 + epsilon) - 2.0)));
  return cfg;
}

RandomizedMatching rand_mowo(const PreferenceProfile& prefs) {
  Matching mu_m = deferred_acceptance(prefs, Side::MenPropose);
  Matching mu_w = deferred_acceptance(prefs, Side::WomenPropose);
  if (mu_m == mu_w) return {{{mu_m, 1.0}}};
  return {{{mu_m, 0.5}, {mu_w, 0.5}}};
}

Matching one_query_mowo(const PreferenceProfile& prefs, ValueOracle& oracle,
                        QueryLedger& ledger) {
  Matching mu_m = deferred_acceptance(prefs, Side::MenPropose);
  Matching mu_w = deferred_acceptance(prefs, Side::WomenPropose);
  PartialValuation partial;
  std::vector<int> w_partner = mu_w.woman_to_man();
  for (int i = 0; i < prefs.n; ++i) {
    value_query(oracle, man(i), woman(mu_m.man_to_woman[i]), ledger, partial);
    value_query(oracle, woman(i), man(w_partner[i]), ledger, partial);
  }
  double rm = revealed_social_welfare(mu_m, partial);
  double rw = revealed_social_welfare(mu_w, partial);
  return rw > rm + kWelfareTol ? mu_w : mu_m;
}

namespace {

// Descending simulated-value thresholds (relative to the favorite stable
// partner's value). The published grid t_l = eps^(l/lambda)/4 only reaches up
// to 1/4; we extend it geometrically (same ratio delta) up to 1 so that every
// bucket under-estimates by at most delta, which the 1+eps guarantee needs.
std::vector<double> tsf_threshold_grid(const TsfConfig& cfg) {
  if (cfg.lambda == 0) return {};
  const double delta = std::pow(cfg.epsilon, -1.0 / cfg.lambda);
  std::vector<double> up;
  for (double u = 0.25 * delta; u < 1.0; u *= delta) up.push_back(u);
  std::vector<double> grid{1.0};
  for (auto it = up.rbegin(); it != up.rend(); ++it) grid.push_back(*it);
  grid.push_back(0.25);
  grid.insert(grid.end(), cfg.thresholds.begin(), cfg.thresholds.end());
  return grid;
}

std::vector<std::vector<int>> stable_partner_lists(const PreferenceProfile& prefs,
                                                   AgentSide side) {
  auto pairs = stable_pairs(prefs);
  const int n = prefs.n;
  std::vector<std::vector<bool>> is_sp(n, std::vector<bool>(n, false));
  for (auto [m, w] : pairs) {
    if (side == AgentSide::Man)
      is_sp[m][w] = true;
    else
      is_sp[w][m] = true;
  }
  std::vector<std::vector<int>> lists(n);
  for (int i = 0; i < n; ++i) {
    const auto& ranking = side == AgentSide::Man ? prefs.men_ranks[i] : prefs.women_ranks[i];
    for (int t : ranking)
      if (is_sp[i][t]) lists[i].push_back(t);
  }
  return lists;
}

}  // namespace

Matching stable_tsf(const PreferenceProfile& prefs, ValueOracle& oracle, double epsilon,
                    QueryLedger& ledger) {
  const int n = prefs.n;
  TsfConfig cfg = TsfConfig::make(epsilon);
  PartialValuation partial;

  if (epsilon < std::log2(static_cast<double>(n)) / n) {
    // Cheap regime: reveal the full profile and optimize exactly.
    ValuationProfile vals;
    vals.men_values = Eigen::MatrixXd::Zero(n, n);
    vals.women_values = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        vals.men_values(i, j) = value_query(oracle, man(i), woman(j), ledger, partial);
        vals.women_values(i, j) = value_query(oracle, woman(i), man(j), ledger, partial);
      }
    return optimal_stable_matching(Instance{prefs, std::move(vals)}).matching;
  }

  ValuationProfile sim;
  sim.men_values = Eigen::MatrixXd::Zero(n, n);
  sim.women_values = Eigen::MatrixXd::Zero(n, n);
  const std::vector<double> grid = tsf_threshold_grid(cfg);

  for (AgentSide side : {AgentSide::Man, AgentSide::Woman}) {
    auto lists = stable_partner_lists(prefs, side);
    Eigen::MatrixXd& out = side == AgentSide::Man ? sim.men_values : sim.women_values;
    for (int i = 0; i < n; ++i) {
      AgentId a{side, i};
      const auto& sp = lists[i];
      std::vector<std::optional<double>> cache(n);
      auto query = [&](int t) {
        if (!cache[t])
          cache[t] = value_query(oracle, a, {side == AgentSide::Man ? AgentSide::Woman
                                                                    : AgentSide::Man, t},
                                 ledger, partial);
        return *cache[t];
      };
      const double vstar = query(sp[0]);
      out(i, sp[0]) = vstar;
      if (vstar <= 0.0) continue;  // every stable partner is worth 0
      int assigned = 1;  // prefix of sp already placed into a bucket
      for (double s : grid) {
        const double thresh = s * vstar;
        // Largest prefix of the stable-partner ranking with value >= thresh
        // (boundary ties go to the higher bucket). Values are non-increasing
        // along the ranking, so binary search applies.
        int lo = assigned, hi = static_cast<int>(sp.size()) - 1, last = assigned - 1;
        while (lo <= hi) {
          int mid = (lo + hi) / 2;
          if (query(sp[mid]) >= thresh - kWelfareTol) {
            last = mid;
            lo = mid + 1;
          } else {
            hi = mid - 1;
          }
        }
        for (int j = assigned; j <= last; ++j) out(i, sp[j]) = thresh;
        assigned = last + 1;
      }
      // Partners below the bottom threshold keep simulated value 0.
    }
  }
  return optimal_stable_matching(Instance{prefs, std::move(sim)}).matching;
}

int poset_search(const std::vector<Matching>& matchings, int target_index, AgentSide side,
                 double epsilon, ValueOracle& oracle, QueryLedger& ledger) {
  const int size = static_cast<int>(matchings.size());
  auto query_sw = [&](int i) {
    return side_welfare_query(oracle, matchings[i], side, ledger, "mu_" + std::to_string(i));
  };
  const double T = query_sw(target_index);
  const double theta = T / (1.0 + epsilon);
  int L = target_index, R = size - 1, lstar = -1;
  while (L <= R) {
    int m = (L + R) / 2;
    if (query_sw(m) >= theta - kWelfareTol) {
      lstar = m;
      L = m + 1;
    } else {
      R = m - 1;
    }
  }
  if (lstar >= 0) return lstar;
  if (target_index + 1 >= size) throw Error("IndexOutOfRange", "no next target matching");
  return target_index + 1;
}

bool is_hasse_path(const RotationPoset& poset) {
  const int R = static_cast<int>(poset.rotations.size());
  if (R <= 1) return true;
  std::vector<int> indeg(R, 0), outdeg(R, 0);
  for (auto [u, v] : poset.hasse_edges) {
    ++outdeg[u];
    ++indeg[v];
  }
  int sources = 0, sinks = 0;
  for (int i = 0; i < R; ++i) {
    if (indeg[i] > 1 || outdeg[i] > 1) return false;
    if (indeg[i] == 0) ++sources;
    if (outdeg[i] == 0) ++sinks;
  }
  return sources == 1 && sinks == 1 &&
         static_cast<int>(poset.hasse_edges.size()) == R - 1;
}

std::vector<Matching> elimination_sequence(const PreferenceProfile& prefs,
                                           const RotationPoset& poset) {
  if (!is_hasse_path(poset)) throw Error("NotAPath", "hasse diagram is not a path");
  const int R = static_cast<int>(poset.rotations.size());
  // Unique topological order of the path.
  std::vector<int> next(R, -1), indeg(R, 0);
  for (auto [u, v] : poset.hasse_edges) {
    next[u] = v;
    ++indeg[v];
  }
  int cur = -1;
  for (int i = 0; i < R; ++i)
    if (indeg[i] == 0) cur = i;
  std::vector<Matching> seq{deferred_acceptance(prefs, Side::MenPropose)};
  while (cur >= 0) {
    const Rotation& rho = poset.rotations[cur];
    seq.push_back(eliminate_rotation(seq.back(), rho, prefs));
    cur = next[cur];
  }
  return seq;
}

Matching hasse_path(const PreferenceProfile& prefs, ValueOracle& oracle, double epsilon,
                    QueryLedger& ledger) {
  RotationPoset poset = build_rotation_poset(prefs);
  std::vector<Matching> seq = elimination_sequence(prefs, poset);
  const int z = static_cast<int>(seq.size()) - 1;
  std::vector<Matching> rev(seq.rbegin(), seq.rend());
  HassePathConfig cfg = HassePathConfig::make(epsilon);

  std::set<int> candidates{0, z};  // global indices into seq
  int t_m = 0, t_w = 0;  // t_w indexes into the reversed sequence
  for (int round = 1; round <= cfg.k; ++round) {
    if (t_m < z) {
      int r = poset_search(seq, t_m, AgentSide::Man, epsilon, oracle, ledger);
      // A result equal to the current target means the very next matching
      // already falls below the threshold; advance by one so the search
      // makes progress (the next matching becomes the new target).
      t_m = (r == t_m) ? t_m + 1 : r;
      candidates.insert(t_m);
    }
    if (t_w < z) {
      int r = poset_search(rev, t_w, AgentSide::Woman, epsilon, oracle, ledger);
      t_w = (r == t_w) ? t_w + 1 : r;
      candidates.insert(z - t_w);
    }
  }

  double best = -1.0;
  int best_idx = -1;
  for (int idx : candidates) {
    std::string id = "mu_" + std::to_string(idx);
    double sw = side_welfare_query(oracle, seq[idx], AgentSide::Man, ledger, id) +
                side_welfare_query(oracle, seq[idx], AgentSide::Woman, ledger, id);
    if (sw > best + kWelfareTol) {
      best = sw;
      best_idx = idx;
    }
  }
  return seq[best_idx];
}

Distortion distortion_ratio(double opt_welfare, double alg_welfare) {
  if (alg_welfare <= kWelfareTol) {
    if (opt_welfare <= kWelfareTol) return {false, 1.0};
    return {true, std::numeric_limits<double>::infinity()};
  }
  return {false, opt_welfare / alg_welfare};
}

std::string distortion_to_string(const Distortion& d) {
  if (d.infinite) return "Infinite";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", d.ratio);
  return buf;
}

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names{"da_men",     "da_women",  "rand_mowo",
                                              "one_mowo",   "stable_tsf", "hasse_path",
                                              "opt"};
  return names;
}

bool is_known_algorithm(const std::string& name) {
  const auto& names = algorithm_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

AlgorithmRun run_algorithm(const std::string& name, const Instance& inst,
                           std::optional<double> epsilon) {
  const int n = inst.prefs.n;
  AlgorithmRun out;
  if (name == "da_men" || name == "da_women") {
    Matching mu = deferred_acceptance(inst.prefs,
                                      name == "da_men" ? Side::MenPropose : Side::WomenPropose);
    out.welfare = social_welfare(mu, inst).total;
    out.matching = mu;
  } else if (name == "opt") {
    OptimalStable opt = optimal_stable_matching(inst);
    out.welfare = opt.welfare.total;
    out.matching = opt.matching;
  } else if (name == "rand_mowo") {
    out.welfare = expected_social_welfare(rand_mowo(inst.prefs), inst).total;
  } else if (name == "one_mowo") {
    InstanceOracle oracle(inst);
    QueryLedger ledger(n);
    Matching mu = one_query_mowo(inst.prefs, oracle, ledger);
    out.welfare = social_welfare(mu, inst).total;
    out.matching = mu;
    out.max_queries = ledger.max_count();
  } else if (name == "stable_tsf" || name == "hasse_path") {
    if (!epsilon) throw Error("BadParam", name + " requires epsilon");
    InstanceOracle oracle(inst);
    QueryLedger ledger(n);
    Matching mu = name == "stable_tsf"
                      ? stable_tsf(inst.prefs, oracle, *epsilon, ledger)
                      : hasse_path(inst.prefs, oracle, *epsilon, ledger);
    out.welfare = social_welfare(mu, inst).total;
    out.matching = mu;
    out.max_queries = ledger.max_count();
  } else {
    throw Error("BadParam", "unknown algorithm: " + name);
  }
  return out;
}

}  // namespace distlab
