#include <doctest.h>

#include <cmath>
#include <map>

#include "distlab/algorithms.hpp"
#include "distlab/welfare_opt.hpp"
#include "helpers.hpp"

using namespace distlab;

namespace {

// Oracle with a prescribed side-welfare table; individual values are unused.
class TableOracle : public ValueOracle {
 public:
  TableOracle(int n, std::map<std::vector<int>, double> table)
      : n_(n), table_(std::move(table)) {}
  int n() const override { return n_; }
  double answer(AgentId, AgentId) override { return 0.0; }
  double side_welfare_answer(const Matching& mu, AgentSide) override {
    return table_.at(mu.man_to_woman);
  }

 private:
  int n_;
  std::map<std::vector<int>, double> table_;
};

std::vector<Matching> distinct_matchings(int n, int count) {
  std::vector<Matching> out;
  std::vector<int> base(n);
  for (int i = 0; i < n; ++i) base[i] = i;
  for (int k = 0; k < count; ++k) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = (i + k) % n;
    out.push_back(Matching{perm});
  }
  return out;
}

}  // namespace

TEST_CASE("rand_mowo support shapes") {
  auto two = rand_mowo(testutil::fig2());
  REQUIRE(two.support.size() == 2);
  CHECK(two.support[0].second == doctest::Approx(0.5));
  CHECK(two.support[1].second == doctest::Approx(0.5));
  CHECK(two.support[0].first != two.support[1].first);

  auto one = rand_mowo(testutil::fig1());
  REQUIRE(one.support.size() == 1);
  CHECK(one.support[0].second == doctest::Approx(1.0));
}

TEST_CASE("rand_mowo achieves ratio exactly 2 on the figure instance") {
  auto inst = testutil::fig2_with(AdversarialValuation::V1);
  auto rand = rand_mowo(inst.prefs);
  double expected = expected_social_welfare(rand, inst).total;
  CHECK(expected == doctest::Approx(0.5));
  auto [mu, opt] = optimal_stable_matching(inst);
  auto d = distortion_ratio(opt.total, expected);
  CHECK(!d.infinite);
  CHECK(d.ratio == doctest::Approx(2.0));
}

TEST_CASE("one query per agent picks the better revealed optimum") {
  auto inst1 = testutil::fig2_with(AdversarialValuation::V1);
  InstanceOracle o1(inst1);
  QueryLedger l1(4);
  CHECK(one_query_mowo(inst1.prefs, o1, l1) ==
        deferred_acceptance(inst1.prefs, Side::WomenPropose));
  for (int i = 0; i < 4; ++i) {
    CHECK(l1.count(man(i)) == 1);
    CHECK(l1.count(woman(i)) == 1);
  }

  auto inst2 = testutil::fig2_with(AdversarialValuation::V2);
  InstanceOracle o2(inst2);
  QueryLedger l2(4);
  CHECK(one_query_mowo(inst2.prefs, o2, l2) ==
        deferred_acceptance(inst2.prefs, Side::MenPropose));
}

TEST_CASE("one-query and randomized outputs keep half the optimum") {
  for (Seed s = 0; s < 60; ++s) {
    int n = 2 + static_cast<int>(s % 12);
    auto inst = testutil::random_instance(n, 20000 + s,
                                          s % 2 ? ValueDist::SpikedUniform : ValueDist::Uniform01);
    double opt = optimal_stable_matching(inst).welfare.total;

    InstanceOracle oracle(inst);
    QueryLedger ledger(n, QueryMode::Adaptive, 1);
    Matching mu = one_query_mowo(inst.prefs, oracle, ledger);
    CHECK(is_stable(mu, inst.prefs));
    CHECK(social_welfare(mu, inst).total >= 0.5 * opt - 1e-9);

    auto rand = rand_mowo(inst.prefs);
    for (const auto& [m, p] : rand.support) CHECK(is_stable(m, inst.prefs));
    CHECK(expected_social_welfare(rand, inst).total >= 0.5 * opt - 1e-9);
  }
}

TEST_CASE("threshold config follows the printed formulas") {
  auto cfg = TsfConfig::make(0.5);
  CHECK(cfg.lambda == static_cast<int>(std::ceil(4.0 * std::log(2.0) / 0.5)));
  REQUIRE(!cfg.thresholds.empty());
  for (size_t i = 0; i + 1 < cfg.thresholds.size(); ++i)
    CHECK(cfg.thresholds[i] > cfg.thresholds[i + 1]);

  CHECK(TsfConfig::make(1.0).lambda == 0);
  try {
    TsfConfig::make(0.0);
    FAIL("expected BadParam");
  } catch (const Error& e) {
    CHECK(e.kind() == "BadParam");
  }
}

TEST_CASE("threshold simulation recovers the optimum on the figure instance") {
  auto inst = testutil::fig2_with(AdversarialValuation::V1);
  InstanceOracle oracle(inst);
  QueryLedger ledger(4);
  Matching mu = stable_tsf(inst.prefs, oracle, 1.0, ledger);
  CHECK(mu == deferred_acceptance(inst.prefs, Side::WomenPropose));
  CHECK(social_welfare(mu, inst).total == doctest::Approx(1.0));
}

TEST_CASE("small markets fall back to querying the full profile") {
  auto inst = testutil::random_instance(4, 77);
  InstanceOracle oracle(inst);
  QueryLedger ledger(4);
  Matching mu = stable_tsf(inst.prefs, oracle, 0.1, ledger);  // 0.1 < log2(4)/4
  CHECK(social_welfare(mu, inst).total ==
        doctest::Approx(optimal_stable_matching(inst).welfare.total));
  CHECK(ledger.max_count() <= 4);
}

TEST_CASE("threshold simulation meets its distortion and query bounds") {
  for (double eps : {0.5, 1.0}) {
    for (Seed s = 0; s < 15; ++s) {
      const int n = 8;
      auto inst = testutil::random_instance(n, 21000 + s);
      double opt = optimal_stable_matching(inst).welfare.total;
      InstanceOracle oracle(inst);
      QueryLedger ledger(n);
      Matching mu = stable_tsf(inst.prefs, oracle, eps, ledger);
      CHECK(is_stable(mu, inst.prefs));
      CHECK((1.0 + eps) * social_welfare(mu, inst).total >= opt - 1e-9);
      int bound = std::min(n, static_cast<int>(std::ceil(4.0 * std::log2(n) / (eps * eps))));
      CHECK(ledger.max_count() <= bound);
    }
  }
}

TEST_CASE("poset search traces") {
  auto ms = distinct_matchings(5, 5);
  TableOracle oracle(5, {{ms[0].man_to_woman, 10.0},
                         {ms[1].man_to_woman, 9.0},
                         {ms[2].man_to_woman, 6.0},
                         {ms[3].man_to_woman, 5.0},
                         {ms[4].man_to_woman, 1.0}});
  QueryLedger ledger(5);
  CHECK(poset_search(ms, 0, AgentSide::Man, 1.0, oracle, ledger) == 3);

  auto ms2 = distinct_matchings(2, 2);
  TableOracle o2(2, {{ms2[0].man_to_woman, 10.0}, {ms2[1].man_to_woman, 4.0}});
  QueryLedger l2(2);
  CHECK(poset_search(ms2, 0, AgentSide::Man, 0.1, o2, l2) == 0);

  auto ms3 = distinct_matchings(3, 3);
  TableOracle o3(3, {{ms3[0].man_to_woman, 7.0},
                     {ms3[1].man_to_woman, 7.0},
                     {ms3[2].man_to_woman, 7.0}});
  QueryLedger l3(3);
  CHECK(poset_search(ms3, 0, AgentSide::Man, 0.5, o3, l3) == 2);
}

TEST_CASE("path detection on the named posets") {
  CHECK(is_hasse_path(build_rotation_poset(testutil::cyclic(5))));
  CHECK(is_hasse_path(build_rotation_poset(testutil::fig1())));
  CHECK(is_hasse_path(build_rotation_poset(testutil::fig2())));
  CHECK(!is_hasse_path(build_rotation_poset(testutil::antichain_profile())));
}

TEST_CASE("path search finds the exact optimum on a single-rotation poset") {
  auto inst = testutil::fig2_with(AdversarialValuation::V1);
  InstanceOracle oracle(inst);
  QueryLedger ledger(4);
  Matching mu = hasse_path(inst.prefs, oracle, 1.0, ledger);
  CHECK(social_welfare(mu, inst).total == doctest::Approx(1.0));
}

TEST_CASE("path search meets its bounds on chain posets") {
  for (double eps : {0.25, 0.5, 1.0}) {
    for (Seed s = 0; s < 10; ++s) {
      const int n = 8;
      auto prefs = testutil::cyclic(n);
      auto inst = fit_values(prefs, ValueDist::Uniform01, 22000 + s);
      double opt = optimal_stable_matching(inst).welfare.total;
      InstanceOracle oracle(inst);
      QueryLedger ledger(n);
      Matching mu = hasse_path(inst.prefs, oracle, eps, ledger);
      CHECK(is_stable(mu, inst.prefs));
      CHECK((1.0 + eps) * social_welfare(mu, inst).total >= opt - 1e-9);
      CHECK(ledger.max_count() <= static_cast<int>(std::ceil(8.0 * std::log2(n) / eps)));
    }
  }
}

TEST_CASE("path search rejects non-path posets") {
  auto prefs = testutil::antichain_profile();
  auto inst = fit_values(prefs, ValueDist::Uniform01, 5);
  InstanceOracle oracle(inst);
  QueryLedger ledger(4);
  try {
    hasse_path(inst.prefs, oracle, 0.5, ledger);
    FAIL("expected NotAPath");
  } catch (const Error& e) {
    CHECK(e.kind() == "NotAPath");
  }
}

TEST_CASE("distortion ratio conventions") {
  auto d1 = distortion_ratio(1.0, 0.5);
  CHECK(!d1.infinite);
  CHECK(d1.ratio == doctest::Approx(2.0));

  auto d2 = distortion_ratio(1.0, 0.0);
  CHECK(d2.infinite);
  CHECK(distortion_to_string(d2) == "Infinite");

  auto d3 = distortion_ratio(0.0, 0.0);
  CHECK(!d3.infinite);
  CHECK(d3.ratio == doctest::Approx(1.0));
}

TEST_CASE("algorithm registry round trip") {
  for (const auto& name : algorithm_names()) CHECK(is_known_algorithm(name));
  CHECK(!is_known_algorithm("nope"));

  auto inst = testutil::random_instance(6, 30000);
  double opt = optimal_stable_matching(inst).welfare.total;
  for (const auto& name : algorithm_names()) {
    std::optional<double> eps;
    if (name == "stable_tsf" || name == "hasse_path") continue;
    auto run = run_algorithm(name, inst, eps);
    CHECK(run.welfare <= opt + 1e-9);
    CHECK(run.welfare >= 0.0);
  }
  auto tsf = run_algorithm("stable_tsf", inst, 0.5);
  CHECK((1.0 + 0.5) * tsf.welfare >= opt - 1e-9);

  try {
    run_algorithm("stable_tsf", inst);
    FAIL("expected BadParam");
  } catch (const Error& e) {
    CHECK(e.kind() == "BadParam");
  }
}

TEST_CASE("side welfare is monotone along the elimination sequence") {
  auto prefs = testutil::cyclic(6);
  auto inst = fit_values(prefs, ValueDist::BetaHalfHalf, 31000);
  auto poset = build_rotation_poset(prefs);
  auto seq = elimination_sequence(prefs, poset);
  REQUIRE(seq.size() == 6);
  for (size_t i = 0; i + 1 < seq.size(); ++i) {
    CHECK(side_welfare(seq[i], inst, AgentSide::Man) >=
          side_welfare(seq[i + 1], inst, AgentSide::Man) - 1e-9);
    CHECK(side_welfare(seq[i], inst, AgentSide::Woman) <=
          side_welfare(seq[i + 1], inst, AgentSide::Woman) + 1e-9);
  }
}
