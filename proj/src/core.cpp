#include "distlab/core.hpp"

namespace distlab {

std::string agent_label(AgentId a) {
  return (a.side == AgentSide::Man ? "m" : "w") + std::to_string(a.index + 1);
}

void PreferenceProfile::freeze() {
  men_pos_.assign(n, std::vector<int>(n, -1));
  women_pos_.assign(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      men_pos_[i][men_ranks[i][k]] = k;
      women_pos_[i][women_ranks[i][k]] = k;
    }
  }
}

std::vector<int> Matching::woman_to_man() const {
  std::vector<int> inv(man_to_woman.size(), -1);
  for (int m = 0; m < size(); ++m) inv[man_to_woman[m]] = m;
  return inv;
}

int Matching::partner_index(AgentId a) const {
  if (a.side == AgentSide::Man) return man_to_woman[a.index];
  for (int m = 0; m < size(); ++m)
    if (man_to_woman[m] == a.index) return m;
  throw Error("Internal", "woman unmatched");
}

namespace {

void check_permutation_rows(const std::vector<std::vector<int>>& rows, int n, AgentSide side) {
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw Error("NotAPermutation", "agent " + agent_label({side, i}) + " has short ranking");
    std::vector<char> seen(n, 0);
    for (int v : rows[i]) {
      if (v < 0 || v >= n || seen[v])
        throw Error("NotAPermutation", "agent " + agent_label({side, i}));
      seen[v] = 1;
    }
  }
}

void check_value_order(const PreferenceProfile& prefs, const ValuationProfile& vals,
                       AgentSide side) {
  for (int i = 0; i < prefs.n; ++i) {
    AgentId a{side, i};
    const auto& r = prefs.ranking(a);
    for (int k = 0; k + 1 < prefs.n; ++k) {
      double cur = vals.value(a, r[k]);
      double nxt = vals.value(a, r[k + 1]);
      if (nxt > cur)
        throw Error("InconsistentOrder",
                    "agent " + agent_label(a) + " at position " + std::to_string(k + 1));
      if (cur < 0.0 || nxt < 0.0)
        throw Error("InconsistentOrder", "agent " + agent_label(a) + " has negative value");
    }
  }
}

}  // namespace

Instance validate_instance(PreferenceProfile prefs, ValuationProfile values) {
  const int n = prefs.n;
  if (static_cast<int>(prefs.men_ranks.size()) != n ||
      static_cast<int>(prefs.women_ranks.size()) != n)
    throw Error("NotAPermutation", "row count mismatch");
  check_permutation_rows(prefs.men_ranks, n, AgentSide::Man);
  check_permutation_rows(prefs.women_ranks, n, AgentSide::Woman);
  if (values.men_values.rows() != n || values.men_values.cols() != n ||
      values.women_values.rows() != n || values.women_values.cols() != n)
    throw Error("InconsistentOrder", "value matrix dimension mismatch");
  prefs.freeze();
  check_value_order(prefs, values, AgentSide::Man);
  check_value_order(prefs, values, AgentSide::Woman);
  return Instance{std::move(prefs), std::move(values)};
}

double side_welfare(const Matching& mu, const Instance& inst, AgentSide side) {
  double s = 0.0;
  const int n = mu.size();
  if (side == AgentSide::Man) {
    for (int m = 0; m < n; ++m) s += inst.values.men_values(m, mu.man_to_woman[m]);
  } else {
    for (int m = 0; m < n; ++m) s += inst.values.women_values(mu.man_to_woman[m], m);
  }
  return s;
}

WelfareValue social_welfare(const Matching& mu, const Instance& inst) {
  WelfareValue w;
  w.men = side_welfare(mu, inst, AgentSide::Man);
  w.women = side_welfare(mu, inst, AgentSide::Woman);
  w.total = w.men + w.women;
  return w;
}

WelfareValue expected_social_welfare(const RandomizedMatching& rand, const Instance& inst) {
  WelfareValue acc;
  for (const auto& [mu, p] : rand.support) {
    WelfareValue w = social_welfare(mu, inst);
    acc.men += p * w.men;
    acc.women += p * w.women;
    acc.total += p * w.total;
  }
  return acc;
}

FavoriteSuitor favorite_and_suitor(const PreferenceProfile& prefs, AgentId agent) {
  AgentSide other = agent.side == AgentSide::Man ? AgentSide::Woman : AgentSide::Man;
  FavoriteSuitor out{{other, prefs.ranking(agent)[0]}, std::nullopt};
  const auto& rows = other == AgentSide::Man ? prefs.men_ranks : prefs.women_ranks;
  for (int j = 0; j < prefs.n; ++j) {
    if (rows[j][0] == agent.index) {
      out.suitor = AgentId{other, j};
      break;
    }
  }
  return out;
}

}  // namespace distlab
