#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "brmst/dataset.hpp"
#include "brmst/families.hpp"
#include "brmst/model.hpp"
#include "brmst/sampler.hpp"

namespace brmst {

/// A: log-logistic, B: log-normal, C: exponential. Custom uses `family`
/// and `shape` with the library's own linear-predictor convention.
enum class Scenario { A, B, C, Custom };

std::string_view to_string(Scenario scenario);
/// Accepts "A", "B", "C" (case-insensitive).
Scenario parse_scenario(std::string_view name);

struct ScenarioConfig {
  Scenario scenario = Scenario::C;
  Family family = Family::Exponential;
  /// k for Weibull/log-logistic, sigma2 for log-normal.
  double shape = 1.0;
  /// Intercept, group and x2 coefficients.
  Eigen::Vector3d beta{-4.5, 0.5, 1.0};
  int n = 512;
  int clusters = 4;
  double effect_variance = 0.1;
  /// Standard deviation of x2; 0 pins x2 at 0.
  double covariate_sd = 1.0;
  double censor_prob = 0.1;
  double admin_cap = 100.0;
  double tau = 100.0;
  int replications = 10;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Defaults for a published scenario at sample size n.
ScenarioConfig scenario_config(Scenario scenario, int n = 512);

/// Distribution of one subject given the linear predictor (including u).
FamilyParams scenario_params(const ScenarioConfig& cfg, double eta);

/// Columns intercept, group, x2; clusters labelled 1..M with equal sizes and
/// groups balanced inside each cluster. With probability censor_prob a
/// subject draws a censoring time uniform on (0, admin_cap), independent of
/// its event time, and is censored there if it comes first; every time is
/// then capped at admin_cap.
SurvivalDataset generate_scenario(const ScenarioConfig& cfg, int replicate);

struct ScenarioTruth {
  double group0;
  double group1;
  double difference;
};

/// Closed-form RMST at tau with x2 = 0 and u = 0.
ScenarioTruth scenario_truth(const ScenarioConfig& cfg);

struct ReplicationRecord {
  int replicate = 0;
  bool ok = false;
  std::string error;
  double mean = 0.0;
  double median = 0.0;
  double mode = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  /// Worst split-Rhat and smallest ESS over the beta coordinates.
  double max_rhat = 0.0;
  double min_ess = 0.0;
};

struct SimMetrics {
  double bias = 0.0;
  double mse = 0.0;
  double mode_diff = 0.0;
  double median_diff = 0.0;
  /// Fraction of successful replications whose interval covers the truth.
  double coverage = 0.0;
  int succeeded = 0;
  int failed = 0;
};

/// Bias, MSE and mode/median offsets of the posterior RMST difference
/// against `truth` over the successful records.
SimMetrics aggregate(const std::vector<ReplicationRecord>& records, double truth);

struct EvaluationOptions {
  double level = 0.95;
  /// Worker threads for replications; 0 means hardware concurrency.
  unsigned threads = 0;
};

struct Evaluation {
  ScenarioTruth truth;
  std::vector<ReplicationRecord> records;
  SimMetrics metrics;
};

/// Generates cfg.replications datasets, fits `spec` to each and summarizes
/// the marginal RMST difference. Replicate r samples with seed
/// derive_seed(sampler.seed, r). Failed fits are kept as records with
/// ok = false and counted in the metrics.
Evaluation evaluate_replications(const ScenarioConfig& cfg, const ModelSpec& spec, const SamplerConfig& sampler,
                                 const EvaluationOptions& options = {});

}  // namespace brmst
