#pragma once

#include <cstdint>
#include <stdexcept>

#include "brmst/draws.hpp"
#include "brmst/inference.hpp"

namespace brmst {

struct SamplerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SamplerConfig {
  int chains = 2;
  int iterations = 2000;
  int burnin = 1000;
  std::uint64_t seed = 1;
  /// Iterations between refreshes of the beta proposal covariance during burn-in.
  int adaptation_window = 50;
  /// Proposals of the joint beta block per iteration; 0 means one per
  /// coordinate in the block, so a sweep costs about one proposal per
  /// parameter as it does for the scalar blocks.
  int joint_repeats = 0;
  double target_accept_block = 0.234;
  double target_accept_scalar = 0.44;
  double initial_step = 0.1;
  double init_jitter = 0.1;
  int init_retries = 100;
  bool parallel_chains = true;

  void validate() const;
};

/// Adaptive random-walk Metropolis within blocks.
///
/// Blocks are beta together with the log shape (joint Gaussian proposal,
/// repeated joint_repeats times per iteration),
/// the shape alone, each cluster effect, phi, and a shift that moves the
/// intercept against all cluster effects when that leaves the likelihood
/// unchanged. Proposal scales follow a Robbins-Monro recursion toward
/// the target acceptance rates and the joint proposal covariance is
/// re-estimated from the second half of the burn-in history; everything is
/// frozen once burn-in ends. Chain c draws from Xoshiro256(seed, c), so the
/// output does not depend on scheduling.
PosteriorDraws run_chains(const SurvivalModel& model, const SamplerConfig& config);
PosteriorDraws run_chains(const SurvivalDataset& data, const ModelSpec& spec, const SamplerConfig& config);

}  // namespace brmst
