#pragma once

#include "distlab/algorithms.hpp"
#include "distlab/generators.hpp"

namespace distlab {

struct ExperimentConfig {
  CultureSpec culture;
  ValueDist dist = ValueDist::Uniform01;
  std::vector<int> n_list;
  int samples = 100;
  Seed seed = 42;
  std::vector<std::string> algorithms;
  std::optional<double> epsilon;  // stable_tsf / hasse_path only
};

struct ReportRow {
  std::string culture;
  std::string dist;
  int n = 0;
  std::string algorithm;
  double mean_opt = 0.0;
  double mean_alg = 0.0;
  double avdist = 1.0;
  int samples = 0;
  Seed seed = 0;
  // Per-sample (opt, alg) welfare pairs, kept for diagnostics; not emitted.
  std::vector<std::pair<double, double>> per_sample;
};

struct DistortionReport {
  std::vector<ReportRow> rows;
};

DistortionReport run_experiment(const ExperimentConfig& config);

// SpikedUniform values across all four cultures at small n.
std::vector<ExperimentConfig> fig6_preset(Seed seed);

struct ScenarioRow {
  std::string scenario;
  std::string algorithm;
  int n = 0;
  double opt_welfare = 0.0;
  double alg_welfare = 0.0;
  Distortion distortion;
};

// Scenarios: fig2_deterministic, reverse_cyclic_randomized, cyclic_adaptive.
std::vector<ScenarioRow> run_adversary_scenario(const std::string& name,
                                                std::optional<int> n = std::nullopt);

enum class ReportFormat { CSV, JSON };

std::string report_to_csv(const DistortionReport& report);
std::string report_to_json(const DistortionReport& report);
void emit(const DistortionReport& report, ReportFormat format, const std::string& path);

// Thread cap: DISTLAB_THREADS, else hardware concurrency.
int max_threads();

}  // namespace distlab
