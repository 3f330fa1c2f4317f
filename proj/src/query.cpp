#include "distlab/query.hpp"

#include <json.hpp>

namespace distlab {

int QueryLedger::max_count() const {
  int m = 0;
  for (int c : counts_) m = std::max(m, c);
  return m;
}

void QueryLedger::declare(AgentId agent, AgentId target) {
  declared_.insert({agent, target});
}

void QueryLedger::charge(AgentId agent, std::optional<AgentId> target) {
  if (mode_ == QueryMode::NonAdaptive && target &&
      declared_.find({agent, *target}) == declared_.end())
    throw Error("UndeclaredQuery",
                agent_label(agent) + " -> " + agent_label(*target));
  if (budget_ && counts_[slot(agent)] + 1 > *budget_)
    throw Error("BudgetExceeded", agent_label(agent));
  ++counts_[slot(agent)];
}

double value_query(ValueOracle& oracle, AgentId agent, AgentId target, QueryLedger& ledger,
                   PartialValuation& partial) {
  ledger.charge(agent, target);
  double v = oracle.answer(agent, target);
  partial.revealed[{agent, target}] = v;
  ledger.transcript.push_back({agent, target, std::nullopt, v, ledger.count(agent)});
  return v;
}

double revealed_social_welfare(const Matching& mu, const PartialValuation& partial) {
  double s = 0.0;
  const int n = mu.size();
  std::vector<int> w_partner = mu.woman_to_man();
  for (int m = 0; m < n; ++m)
    if (auto v = partial.lookup(man(m), woman(mu.man_to_woman[m]))) s += *v;
  for (int w = 0; w < n; ++w)
    if (auto v = partial.lookup(woman(w), man(w_partner[w]))) s += *v;
  return s;
}

double side_welfare_query(ValueOracle& oracle, const Matching& mu, AgentSide side,
                          QueryLedger& ledger, const std::string& matching_id) {
  for (int i = 0; i < oracle.n(); ++i) ledger.charge({side, i}, std::nullopt);
  double v = oracle.side_welfare_answer(mu, side);
  for (int i = 0; i < oracle.n(); ++i)
    ledger.transcript.push_back(
        {{side, i}, std::nullopt, matching_id, v, ledger.count({side, i})});
  return v;
}

ValuationProfile dichotomous_from_transition(const PreferenceProfile& prefs,
                                             const TransitionProfile& tr) {
  const int n = prefs.n;
  ValuationProfile out;
  out.men_values = Eigen::MatrixXd::Zero(n, n);
  out.women_values = Eigen::MatrixXd::Zero(n, n);
  auto fill = [&](AgentSide side, const std::vector<std::optional<int>>& trs,
                  Eigen::MatrixXd& vals) {
    for (int i = 0; i < n; ++i) {
      int cutoff = trs[i] ? *trs[i] : n + 1;  // value 1 for 1-based ranks < cutoff
      if (trs[i] && (*trs[i] < 1 || *trs[i] > n))
        throw Error("BadParam", "transition point out of range");
      const auto& ranking = side == AgentSide::Man ? prefs.men_ranks[i] : prefs.women_ranks[i];
      for (int k = 0; k + 1 < cutoff && k < n; ++k) vals(i, ranking[k]) = 1.0;
    }
  };
  fill(AgentSide::Man, tr.men_tr, out.men_values);
  fill(AgentSide::Woman, tr.women_tr, out.women_values);
  return out;
}

AdaptiveAdversaryOracle::AdaptiveAdversaryOracle(const PreferenceProfile& cyclic_prefs)
    : prefs_(cyclic_prefs) {
  const int n = prefs_.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (prefs_.men_ranks[i][j] != (i + j) % n ||
          prefs_.women_ranks[i][j] != (i + 1 + j) % n)
        throw Error("InconsistentState", "profile is not the cyclic shift profile");
    }
  lo_ = 0;
  hi_ = n - 1;
}

int AdaptiveAdversaryOracle::matching_index_of_target(AgentId agent, AgentId target) const {
  // mu_k matches m_i with w_{(i+k) mod n}.
  if (agent == man(0)) return target.index;
  return (prefs_.n - target.index) % prefs_.n;
}

double AdaptiveAdversaryOracle::answer(AgentId agent, AgentId target) {
  if (agent != man(0) && agent != woman(0)) return 0.0;  // transition point 1
  const int k = matching_index_of_target(agent, target);
  // m1 prefers small matching indices, w1 prefers large ones.
  const bool man_side = agent == man(0);
  if (man_side ? k < lo_ : k > hi_) return 1.0;
  if (man_side ? k > hi_ : k < lo_) return 0.0;
  int better = man_side ? k - lo_ : hi_ - k;   // still-uninformed, preferred to target
  int worse = man_side ? hi_ - k : k - lo_;
  if (better >= worse) {
    // Bottom half (ties included): answer 0, keep the preferred side open.
    if (man_side)
      hi_ = k - 1;
    else
      lo_ = k + 1;
    return 0.0;
  }
  if (man_side)
    lo_ = k + 1;
  else
    hi_ = k - 1;
  return 1.0;
}

double AdaptiveAdversaryOracle::side_welfare_answer(const Matching&, AgentSide) {
  throw Error("InconsistentState", "adversary oracle answers value queries only");
}

std::optional<int> AdaptiveAdversaryOracle::matching_index(const Matching& mu) const {
  const int n = prefs_.n;
  int k = mu.man_to_woman[0];
  for (int i = 0; i < n; ++i)
    if (mu.man_to_woman[i] != (i + k) % n) return std::nullopt;
  return k;
}

ValuationProfile AdaptiveAdversaryOracle::finalize(const Matching& output) {
  const int n = prefs_.n;
  TransitionProfile tr;
  tr.men_tr.assign(n, 1);
  tr.women_tr.assign(n, 1);

  auto clamp_tr = [n](int t) -> std::optional<int> {
    return t > n ? std::optional<int>() : std::optional<int>(t);  // > n means all ones
  };
  std::optional<int> out_idx = matching_index(output);
  // Rank of mu_k's partner: k+1 on m1's list, n-k on w1's list (1-based).
  if (lo_ > hi_) {
    // Everything is determined; commit the forced transition points.
    tr.men_tr[0] = clamp_tr(lo_ + 1);
    tr.women_tr[0] = clamp_tr(n - lo_ + 1);
  } else if (out_idx && *out_idx >= lo_ && *out_idx <= hi_) {
    // Case 1: the output is still uninformed -> give it welfare 0.
    tr.men_tr[0] = *out_idx + 1;
    tr.women_tr[0] = n - *out_idx;
  } else {
    // Case 2: pick an uninformed matching and give it welfare 2; every other
    // stable matching gets exactly 1.
    int tilde = lo_;
    tr.men_tr[0] = clamp_tr(tilde + 2);
    tr.women_tr[0] = clamp_tr(n - tilde + 1);
  }
  return dichotomous_from_transition(prefs_, tr);
}

std::string transcript_to_json(const std::vector<TranscriptEntry>& transcript) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : transcript) {
    nlohmann::json obj;
    obj["agent"] = agent_label(e.agent);
    if (e.target) obj["target"] = agent_label(*e.target);
    if (e.matching_id) obj["matching_id"] = *e.matching_id;
    obj["answer"] = e.answer;
    obj["running_count"] = e.running_count;
    arr.push_back(obj);
  }
  return arr.dump(2);
}

}  // namespace distlab
