#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace distlab {

// Absolute tolerance for all welfare comparisons.
inline constexpr double kWelfareTol = 1e-9;

enum class AgentSide { Man, Woman };

struct AgentId {
  AgentSide side;
  int index;

  friend bool operator==(const AgentId&, const AgentId&) = default;
  friend auto operator<=>(const AgentId&, const AgentId&) = default;
};

inline AgentId man(int i) { return {AgentSide::Man, i}; }
inline AgentId woman(int i) { return {AgentSide::Woman, i}; }

// 1-based label matching the usual figure conventions (m1..mn / w1..wn).
std::string agent_label(AgentId a);

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Strict complete rankings for both sides. men_ranks[i] lists woman indices
// from most to least preferred; women_ranks likewise over man indices.
struct PreferenceProfile {
  int n = 0;
  std::vector<std::vector<int>> men_ranks;
  std::vector<std::vector<int>> women_ranks;

  const std::vector<int>& ranking(AgentId a) const {
    return a.side == AgentSide::Man ? men_ranks[a.index] : women_ranks[a.index];
  }
  // Position (0-based rank) of `target` in `a`'s ranking. O(1) after freeze().
  int rank_of(AgentId a, int target) const {
    const auto& pos = a.side == AgentSide::Man ? men_pos_ : women_pos_;
    if (!pos.empty()) return pos[a.index][target];
    const auto& r = ranking(a);
    for (int k = 0; k < n; ++k)
      if (r[k] == target) return k;
    throw Error("Internal", "target not in ranking");
  }
  // a prefers x to y?
  bool prefers(AgentId a, int x, int y) const { return rank_of(a, x) < rank_of(a, y); }

  void freeze();  // builds the inverse-rank tables

  friend bool operator==(const PreferenceProfile& a, const PreferenceProfile& b) {
    return a.n == b.n && a.men_ranks == b.men_ranks && a.women_ranks == b.women_ranks;
  }

 private:
  std::vector<std::vector<int>> men_pos_, women_pos_;
};

// men_values(i, j) = value of man i for woman j; women_values(i, j) = value of
// woman i for man j.
struct ValuationProfile {
  Eigen::MatrixXd men_values;
  Eigen::MatrixXd women_values;

  double value(AgentId a, int target) const {
    return a.side == AgentSide::Man ? men_values(a.index, target)
                                    : women_values(a.index, target);
  }
};

struct Instance {
  PreferenceProfile prefs;
  ValuationProfile values;
};

struct Matching {
  std::vector<int> man_to_woman;

  int size() const { return static_cast<int>(man_to_woman.size()); }
  int woman_of(int m) const { return man_to_woman[m]; }
  std::vector<int> woman_to_man() const;
  int partner_index(AgentId a) const;

  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching&, const Matching&) = default;
};

struct RandomizedMatching {
  std::vector<std::pair<Matching, double>> support;
};

struct WelfareValue {
  double total = 0.0;
  double men = 0.0;
  double women = 0.0;
};

// Checks permutation rows and value/ranking consistency; throws
// NotAPermutation or InconsistentOrder. Returns a frozen instance.
Instance validate_instance(PreferenceProfile prefs, ValuationProfile values);

WelfareValue social_welfare(const Matching& mu, const Instance& inst);
double side_welfare(const Matching& mu, const Instance& inst, AgentSide side);
WelfareValue expected_social_welfare(const RandomizedMatching& rand, const Instance& inst);

struct FavoriteSuitor {
  AgentId favorite;
  std::optional<AgentId> suitor;
};

FavoriteSuitor favorite_and_suitor(const PreferenceProfile& prefs, AgentId agent);

}  // namespace distlab
