#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "distlab/experiment.hpp"
#include "distlab/json_io.hpp"
#include "distlab/welfare_opt.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<int> split_ints(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split_list(text)) {
    size_t pos = 0;
    int v = std::stoi(item, &pos);
    if (pos != item.size() || v < 1) throw distlab::Error("BadParam", "bad n value: " + item);
    out.push_back(v);
  }
  return out;
}

distlab::PreferenceProfile profile_from_spec(const std::string& text) {
  auto sized = [&](const std::string& prefix) -> std::optional<int> {
    if (text.rfind(prefix + ":", 0) != 0) return std::nullopt;
    return std::stoi(text.substr(prefix.size() + 1));
  };
  if (text == "fig1") return distlab::adversarial_profile(distlab::AdversarialProfile::Figure1, 4);
  if (text == "fig2") return distlab::adversarial_profile(distlab::AdversarialProfile::Figure2, 4);
  if (auto n = sized("cyclic"))
    return distlab::adversarial_profile(distlab::AdversarialProfile::CyclicShift, *n);
  if (auto n = sized("revcyclic"))
    return distlab::adversarial_profile(distlab::AdversarialProfile::ReverseCyclicShift, *n);
  throw distlab::Error("BadParam", "unknown profile: " + text);
}

int cmd_run(const std::string& culture, const std::string& dist, const std::string& n_text,
            int samples, distlab::Seed seed, const std::string& alg_text,
            std::optional<double> epsilon, const std::string& out_path,
            const std::string& format_text, bool preset_fig6) {
  auto format = [&] {
    if (format_text == "csv") return distlab::ReportFormat::CSV;
    if (format_text == "json") return distlab::ReportFormat::JSON;
    throw distlab::Error("BadParam", "unknown format: " + format_text);
  }();

  distlab::DistortionReport report;
  if (preset_fig6) {
    for (const auto& cfg : distlab::fig6_preset(seed)) {
      auto part = distlab::run_experiment(cfg);
      for (auto& row : part.rows) report.rows.push_back(std::move(row));
    }
  } else {
    distlab::ExperimentConfig cfg;
    cfg.culture = distlab::CultureSpec::parse(culture);
    cfg.dist = distlab::parse_value_dist(dist);
    cfg.n_list = split_ints(n_text);
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.algorithms = split_list(alg_text);
    cfg.epsilon = epsilon;
    if (cfg.n_list.empty()) throw distlab::Error("BadParam", "empty n list");
    if (cfg.algorithms.empty()) throw distlab::Error("BadParam", "empty algorithm list");
    report = distlab::run_experiment(cfg);
  }

  if (out_path.empty()) {
    std::cout << (format == distlab::ReportFormat::CSV ? distlab::report_to_csv(report)
                                                       : distlab::report_to_json(report));
  } else {
    distlab::emit(report, format, out_path);
  }
  return 0;
}

int cmd_adversary(const std::string& name, std::optional<int> n) {
  auto rows = distlab::run_adversary_scenario(name, n);
  std::printf("scenario,algorithm,n,opt_welfare,alg_welfare,distortion\n");
  for (const auto& r : rows)
    std::printf("%s,%s,%d,%.6f,%.6f,%s\n", r.scenario.c_str(), r.algorithm.c_str(), r.n,
                r.opt_welfare, r.alg_welfare, distlab::distortion_to_string(r.distortion).c_str());
  return 0;
}

int cmd_poset(const std::string& profile_text, const std::string& in_path,
              const std::string& dot_path) {
  if (profile_text.empty() == in_path.empty())
    throw distlab::Error("BadParam", "exactly one of --profile / --in is required");
  distlab::PreferenceProfile prefs =
      in_path.empty() ? profile_from_spec(profile_text) : distlab::load_instance_file(in_path).prefs;
  auto poset = distlab::build_rotation_poset(prefs);
  std::string dot = distlab::poset_to_dot(poset);
  if (dot_path.empty()) {
    std::cout << dot;
  } else {
    std::ofstream out(dot_path);
    if (!out) throw distlab::Error("IO", "cannot write " + dot_path);
    out << dot;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable-matching distortion laboratory"};
  app.require_subcommand(1);

  std::string culture = "ic", dist = "uniform", n_text = "10", alg_text = "da_men";
  std::string out_path, format_text = "csv";
  int samples = 100;
  distlab::Seed seed = 42;
  double epsilon_val = 0.0;
  bool preset_fig6 = false;

  auto* run = app.add_subcommand("run", "Average-case distortion experiments");
  run->add_option("--culture", culture, "attributes[:d=K] | ic | ic2[:p=P] | mallows[:normphi=F]");
  run->add_option("--dist", dist, "uniform | beta | exp | spiked");
  run->add_option("--n", n_text, "comma-separated instance sizes");
  run->add_option("--samples", samples, "samples per size");
  run->add_option("--seed", seed, "base seed");
  run->add_option("--alg", alg_text, "comma-separated algorithm names");
  auto* eps_opt = run->add_option("--epsilon", epsilon_val, "epsilon for stable_tsf / hasse_path");
  run->add_option("--out", out_path, "output path (stdout if omitted)");
  run->add_option("--format", format_text, "csv | json");
  std::string preset_name;
  run->add_option("--preset", preset_name, "fig6");

  std::string scenario_name;
  int scenario_n = 0;
  auto* adv = app.add_subcommand("adversary", "Worst-case scenarios");
  adv->add_option("name", scenario_name, "scenario name")->required();
  auto* adv_n = adv->add_option("--n", scenario_n, "instance size");

  std::string profile_text, in_path, dot_path;
  auto* poset = app.add_subcommand("poset", "Rotation poset inspection");
  poset->add_option("--profile", profile_text, "fig1 | fig2 | cyclic:N | revcyclic:N");
  poset->add_option("--in", in_path, "instance JSON file");
  poset->add_option("--dot", dot_path, "DOT output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
    if (run->parsed()) {
      if (!preset_name.empty()) {
        if (preset_name != "fig6")
          throw distlab::Error("BadParam", "unknown preset: " + preset_name);
        preset_fig6 = true;
      }
      std::optional<double> epsilon;
      if (eps_opt->count()) epsilon = epsilon_val;
      return cmd_run(culture, dist, n_text, samples, seed, alg_text, epsilon, out_path,
                     format_text, preset_fig6);
    }
    if (adv->parsed()) {
      std::optional<int> n;
      if (adv_n->count()) n = scenario_n;
      return cmd_adversary(scenario_name, n);
    }
    if (poset->parsed()) return cmd_poset(profile_text, in_path, dot_path);
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const distlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
