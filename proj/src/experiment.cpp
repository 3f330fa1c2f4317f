#include "distlab/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <mutex>
#include <thread>

#include "distlab/welfare_opt.hpp"

namespace distlab {

int max_threads() {
  if (const char* env = std::getenv("DISTLAB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

namespace {

void parallel_for(int count, const std::function<void(int)>& body) {
  const int threads = std::min(max_threads(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / xs.size();
}

}  // namespace

DistortionReport run_experiment(const ExperimentConfig& config) {
  if (config.samples < 1) throw Error("BadParam", "samples must be >= 1");
  for (const auto& name : config.algorithms)
    if (!is_known_algorithm(name)) throw Error("BadParam", "unknown algorithm: " + name);

  DistortionReport report;
  for (int n : config.n_list) {
    std::vector<Instance> instances(config.samples);
    std::vector<double> opt(config.samples);
    parallel_for(config.samples, [&](int j) {
      Seed derived = hash_seed(config.seed, static_cast<std::uint64_t>(n),
                               static_cast<std::uint64_t>(j));
      PreferenceProfile prefs = gen_culture(config.culture, n, derived);
      instances[j] = fit_values(prefs, config.dist, derived);
      opt[j] = optimal_stable_matching(instances[j]).welfare.total;
    });
    for (const auto& name : config.algorithms) {
      std::vector<double> alg(config.samples);
      parallel_for(config.samples, [&](int j) {
        alg[j] = name == "opt" ? opt[j]
                               : run_algorithm(name, instances[j], config.epsilon).welfare;
      });
      ReportRow row;
      row.culture = config.culture.name();
      row.dist = value_dist_name(config.dist);
      row.n = n;
      row.algorithm = name;
      row.mean_opt = mean_of(opt);
      row.mean_alg = mean_of(alg);
      row.avdist = row.mean_alg > 0.0 ? row.mean_opt / row.mean_alg : 1.0;
      row.samples = config.samples;
      row.seed = config.seed;
      for (int j = 0; j < config.samples; ++j) row.per_sample.push_back({opt[j], alg[j]});
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::vector<ExperimentConfig> fig6_preset(Seed seed) {
  std::vector<ExperimentConfig> configs;
  for (const char* culture : {"attributes:d=2", "ic", "ic2:p=0.25", "mallows:normphi=0.5"}) {
    ExperimentConfig cfg;
    cfg.culture = CultureSpec::parse(culture);
    cfg.dist = ValueDist::SpikedUniform;
    cfg.n_list = {3, 5, 8, 10, 12, 15};
    cfg.samples = 100;
    cfg.seed = seed;
    cfg.algorithms = {"da_men", "rand_mowo", "one_mowo"};
    configs.push_back(std::move(cfg));
  }
  return configs;
}

namespace {

ScenarioRow scenario_row(const std::string& scenario, const std::string& algorithm, int n,
                         double opt_w, double alg_w) {
  return {scenario, algorithm, n, opt_w, alg_w, distortion_ratio(opt_w, alg_w)};
}

std::vector<ScenarioRow> fig2_deterministic_scenario() {
  PreferenceProfile prefs = adversarial_profile(AdversarialProfile::Figure2, 4);
  Matching mu_m = deferred_acceptance(prefs, Side::MenPropose);
  std::vector<ScenarioRow> rows;
  for (const char* name : {"da_men", "da_women"}) {
    Matching mu = deferred_acceptance(
        prefs, std::string(name) == "da_men" ? Side::MenPropose : Side::WomenPropose);
    // The adversary shows v1 against the man-optimal output, v2 otherwise.
    auto kind = mu == mu_m ? AdversarialValuation::V1 : AdversarialValuation::V2;
    Instance inst = validate_instance(prefs, adversarial_valuation(kind, prefs));
    double opt_w = optimal_stable_matching(inst).welfare.total;
    rows.push_back(scenario_row("fig2_deterministic", name, 4, opt_w,
                                social_welfare(mu, inst).total));
  }
  return rows;
}

std::vector<ScenarioRow> reverse_cyclic_scenario(int n) {
  PreferenceProfile prefs = adversarial_profile(AdversarialProfile::ReverseCyclicShift, n);
  RandomizedMatching rand = rand_mowo(prefs);
  // A man is made selective exactly when the algorithm gives him his favorite
  // with probability at most 1/2; his suitor takes the complementary role.
  std::vector<bool> selective(n);
  for (int m = 0; m < n; ++m) {
    int fav = prefs.men_ranks[m][0];
    double p = 0.0;
    for (const auto& [mu, prob] : rand.support)
      if (mu.man_to_woman[m] == fav) p += prob;
    selective[m] = p <= 0.5;
  }
  Instance inst = validate_instance(
      prefs, adversarial_valuation(AdversarialValuation::SelectiveIndifferent, prefs, selective));
  double opt_w = optimal_stable_matching(inst).welfare.total;
  double alg_w = expected_social_welfare(rand, inst).total;
  return {scenario_row("reverse_cyclic_randomized", "rand_mowo", n, opt_w, alg_w)};
}

std::vector<ScenarioRow> cyclic_adaptive_scenario(int n) {
  PreferenceProfile prefs = adversarial_profile(AdversarialProfile::CyclicShift, n);
  std::vector<ScenarioRow> rows;
  // Deterministic algorithms that stay within 2 adaptive queries per agent.
  for (const char* name : {"da_men", "da_women", "one_mowo"}) {
    AdaptiveAdversaryOracle oracle(prefs);
    QueryLedger ledger(n, QueryMode::Adaptive, 2);
    Matching mu = std::string(name) == "one_mowo"
                      ? one_query_mowo(prefs, oracle, ledger)
                      : deferred_acceptance(prefs, std::string(name) == "da_men"
                                                       ? Side::MenPropose
                                                       : Side::WomenPropose);
    Instance inst = validate_instance(prefs, oracle.finalize(mu));
    double opt_w = optimal_stable_matching(inst).welfare.total;
    rows.push_back(
        scenario_row("cyclic_adaptive", name, n, opt_w, social_welfare(mu, inst).total));
  }
  return rows;
}

}  // namespace

std::vector<ScenarioRow> run_adversary_scenario(const std::string& name, std::optional<int> n) {
  if (name == "fig2_deterministic") {
    if (n && *n != 4) throw Error("BadN", "fig2_deterministic requires n = 4");
    return fig2_deterministic_scenario();
  }
  if (name == "reverse_cyclic_randomized") return reverse_cyclic_scenario(n.value_or(40));
  if (name == "cyclic_adaptive") return cyclic_adaptive_scenario(n.value_or(64));
  throw Error("UnknownScenario", name);
}

std::string report_to_csv(const DistortionReport& report) {
  std::string out = "culture,dist,n,algorithm,mean_opt,mean_alg,avdist,samples,seed\n";
  char buf[256];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%s,%.6f,%.6f,%.6f,%d,%llu\n", r.culture.c_str(),
                  r.dist.c_str(), r.n, r.algorithm.c_str(), r.mean_opt, r.mean_alg, r.avdist,
                  r.samples, static_cast<unsigned long long>(r.seed));
    out += buf;
  }
  return out;
}

std::string report_to_json(const DistortionReport& report) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json obj;
    obj["culture"] = r.culture;
    obj["dist"] = r.dist;
    obj["n"] = r.n;
    obj["algorithm"] = r.algorithm;
    obj["mean_opt"] = r.mean_opt;
    obj["mean_alg"] = r.mean_alg;
    obj["avdist"] = r.avdist;
    obj["samples"] = r.samples;
    obj["seed"] = r.seed;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

void emit(const DistortionReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("IO", "cannot write " + path);
  out << (format == ReportFormat::CSV ? report_to_csv(report) : report_to_json(report));
  if (!out) throw Error("IO", "write failed: " + path);
}

}  // namespace distlab
