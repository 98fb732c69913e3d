#pragma once

#include <Eigen/Core>

#include "brmst/dataset.hpp"
#include "brmst/draws.hpp"
#include "brmst/model.hpp"

namespace brmst {

struct WaicResult {
  double waic = 0.0;
  double lppd = 0.0;
  double p_waic = 0.0;
  /// Per observation: -2 (lppd_i - p_waic_i).
  Eigen::VectorXd pointwise;
  /// Set when every observation has zero log-likelihood variance across draws.
  bool degenerate = false;
};

/// WAIC on the deviance scale from an (draws x observations) matrix of
/// pointwise log-likelihoods. The variance term uses the 1/S normalization,
/// so repeating every draw leaves the result unchanged.
WaicResult waic(const Eigen::Ref<const Eigen::MatrixXd>& log_lik);

/// Pointwise log-likelihood of every pooled draw (draws x observations).
Eigen::MatrixXd pointwise_log_likelihood(const SurvivalDataset& data, const PosteriorDraws& draws);

WaicResult waic(const SurvivalDataset& data, const PosteriorDraws& draws);

}  // namespace brmst
