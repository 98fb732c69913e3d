#pragma once

#include <Eigen/Core>
#include <stdexcept>

#include "brmst/draws.hpp"

namespace brmst {

struct DiagnosticsError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Both functions take a (kept x chains) matrix: one column per chain.

/// Classic split-Rhat: every chain is cut into two halves and
/// sqrt(((n-1)/n W + B/n) / W) is formed from the halves. A column that is
/// constant everywhere gives 1; zero within-half variance with distinct
/// halves gives +infinity.
double split_rhat(const Eigen::Ref<const Eigen::MatrixXd>& chains);
double split_rhat(const PosteriorDraws& draws, Eigen::Index column);

/// Multi-chain ESS from the averaged autocorrelations, truncated with
/// Geyer's initial monotone sequence. Constant draws give 0.
double effective_sample_size(const Eigen::Ref<const Eigen::MatrixXd>& chains);
double effective_sample_size(const PosteriorDraws& draws, Eigen::Index column);

}  // namespace brmst
