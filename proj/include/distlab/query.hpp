#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>

#include "distlab/core.hpp"

namespace distlab {

struct PartialValuation {
  std::map<std::pair<AgentId, AgentId>, double> revealed;

  std::optional<double> lookup(AgentId agent, AgentId target) const {
    auto it = revealed.find({agent, target});
    if (it == revealed.end()) return std::nullopt;
    return it->second;
  }
};

enum class QueryMode { Adaptive, NonAdaptive };

struct TranscriptEntry {
  AgentId agent;
  std::optional<AgentId> target;        // absent for whole-side welfare queries
  std::optional<std::string> matching_id;
  double answer = 0.0;
  int running_count = 0;
};

class QueryLedger {
 public:
  QueryLedger(int n, QueryMode mode = QueryMode::Adaptive,
              std::optional<int> budget = std::nullopt)
      : n_(n), mode_(mode), budget_(budget), counts_(2 * n, 0) {}

  int count(AgentId a) const { return counts_[slot(a)]; }
  int max_count() const;
  QueryMode mode() const { return mode_; }

  // NonAdaptive mode: the full query set must be declared up front.
  void declare(AgentId agent, AgentId target);
  void charge(AgentId agent, std::optional<AgentId> target);

  std::vector<TranscriptEntry> transcript;

 private:
  int slot(AgentId a) const { return (a.side == AgentSide::Man ? 0 : n_) + a.index; }

  int n_;
  QueryMode mode_;
  std::optional<int> budget_;
  std::vector<int> counts_;
  std::set<std::pair<AgentId, AgentId>> declared_;
};

class ValueOracle {
 public:
  virtual ~ValueOracle() = default;
  virtual int n() const = 0;
  // Raw answer; accounting is done by value_query().
  virtual double answer(AgentId agent, AgentId target) = 0;
  // Exact side welfare, for the whole-matching query primitive.
  virtual double side_welfare_answer(const Matching& mu, AgentSide side) = 0;
};

class InstanceOracle : public ValueOracle {
 public:
  explicit InstanceOracle(const Instance& inst) : inst_(inst) {}
  int n() const override { return inst_.prefs.n; }
  double answer(AgentId agent, AgentId target) override {
    return inst_.values.value(agent, target.index);
  }
  double side_welfare_answer(const Matching& mu, AgentSide side) override {
    return side_welfare(mu, inst_, side);
  }
  const Instance& instance() const { return inst_; }

 private:
  const Instance& inst_;
};

double value_query(ValueOracle& oracle, AgentId agent, AgentId target, QueryLedger& ledger,
                   PartialValuation& partial);

double revealed_social_welfare(const Matching& mu, const PartialValuation& partial);

// Charges one query to every agent of `side`.
double side_welfare_query(ValueOracle& oracle, const Matching& mu, AgentSide side,
                          QueryLedger& ledger, const std::string& matching_id = "");

// tr(a) in [1, n]: value 1 for the first tr-1 ranked partners, 0 afterward;
// unset means all ones.
struct TransitionProfile {
  std::vector<std::optional<int>> men_tr, women_tr;
};

ValuationProfile dichotomous_from_transition(const PreferenceProfile& prefs,
                                             const TransitionProfile& tr);

// Adversary for the cyclic shift profile: answers value queries for m1 and w1
// so that a consistent dichotomous completion always exists while the set of
// stable matchings whose welfare is still undetermined shrinks by at most half
// per query. All other agents have transition point 1 (all-zero rows).
class AdaptiveAdversaryOracle : public ValueOracle {
 public:
  explicit AdaptiveAdversaryOracle(const PreferenceProfile& cyclic_prefs);
  int n() const override { return prefs_.n; }
  double answer(AgentId agent, AgentId target) override;
  double side_welfare_answer(const Matching& mu, AgentSide side) override;

  // [lo, hi] over stable-matching indices 0..n-1 (mu_k matches m_i to w_{i+k}).
  std::pair<int, int> uninformed_interval() const { return {lo_, hi_}; }

  // Commits transition points given the algorithm's output and returns the
  // completed valuation profile (consistent with every past answer).
  ValuationProfile finalize(const Matching& output);

 private:
  int matching_index_of_target(AgentId agent, AgentId target) const;
  std::optional<int> matching_index(const Matching& mu) const;

  PreferenceProfile prefs_;
  int lo_ = 0, hi_ = 0;
};

std::string transcript_to_json(const std::vector<TranscriptEntry>& transcript);

}  // namespace distlab
