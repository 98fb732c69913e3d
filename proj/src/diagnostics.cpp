#include "brmst/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace brmst {

namespace {

void require_draws(const Eigen::Ref<const Eigen::MatrixXd>& chains, Eigen::Index min_kept) {
  if (chains.cols() < 1 || chains.rows() < min_kept)
    throw DiagnosticsError("not enough draws for the diagnostic");
  if (chains.rows() * chains.cols() < 100) throw DiagnosticsError("diagnostics need at least 100 draws in total");
  if (!chains.allFinite()) throw DiagnosticsError("draws contain non-finite values");
}

double variance(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const double mean = x.mean();
  return (x.array() - mean).square().sum() / static_cast<double>(x.size() - 1);
}

// Autocovariance at `lag` normalized by n (the biased estimator used by the
// ESS literature).
double autocovariance(const Eigen::Ref<const Eigen::VectorXd>& x, double mean, Eigen::Index lag) {
  const Eigen::Index n = x.size();
  const Eigen::Index m = n - lag;
  const double s = ((x.head(m).array() - mean) * (x.tail(m).array() - mean)).sum();
  return s / static_cast<double>(n);
}

}  // namespace

double split_rhat(const Eigen::Ref<const Eigen::MatrixXd>& chains) {
  require_draws(chains, 4);
  const Eigen::Index half = chains.rows() / 2;
  const Eigen::Index offset = chains.rows() - half;  // drops the middle draw for odd lengths
  const Eigen::Index m = 2 * chains.cols();
  Eigen::VectorXd means(m), vars(m);
  for (Eigen::Index c = 0; c < chains.cols(); ++c) {
    const Eigen::VectorXd first = chains.col(c).head(half);
    const Eigen::VectorXd second = chains.col(c).segment(offset, half);
    means(2 * c) = first.mean();
    means(2 * c + 1) = second.mean();
    vars(2 * c) = variance(first);
    vars(2 * c + 1) = variance(second);
  }
  const double n = static_cast<double>(half);
  const double w = vars.mean();
  const double b = n * variance(means);
  if (w <= 0.0) return b <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double var_plus = (n - 1.0) / n * w + b / n;
  return std::sqrt(var_plus / w);
}

double split_rhat(const PosteriorDraws& draws, Eigen::Index column) {
  return split_rhat(draws.column_by_chain(column));
}

double effective_sample_size(const Eigen::Ref<const Eigen::MatrixXd>& chains) {
  require_draws(chains, 4);
  const Eigen::Index n = chains.rows();
  const Eigen::Index m = chains.cols();
  const double nd = static_cast<double>(n);

  Eigen::VectorXd means(m), vars(m);
  for (Eigen::Index c = 0; c < m; ++c) {
    means(c) = chains.col(c).mean();
    vars(c) = variance(chains.col(c));
  }
  const double w = vars.mean();
  if (w <= 0.0) return 0.0;
  const double b_over_n = m > 1 ? variance(means) : 0.0;
  const double var_plus = (nd - 1.0) / nd * w + b_over_n;

  auto rho = [&](Eigen::Index lag) {
    double acov = 0.0;
    for (Eigen::Index c = 0; c < m; ++c) acov += autocovariance(chains.col(c), means(c), lag);
    acov /= static_cast<double>(m);
    // Per-chain variances use n - 1; the lag-0 autocovariance uses n.
    return 1.0 - (w * (nd - 1.0) / nd - acov) / var_plus;
  };

  // Sum pairs Gamma_t = rho_{2t} + rho_{2t+1} while positive, forcing them
  // to be nonincreasing.
  double sum = 0.0;
  double previous_pair = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; 2 * t + 1 < n; ++t) {
    double pair = (t == 0 ? 1.0 : rho(2 * t)) + rho(2 * t + 1);
    if (!(pair > 0.0)) break;
    pair = std::min(pair, previous_pair);
    sum += pair;
    previous_pair = pair;
  }
  const double tau = std::max(-1.0 + 2.0 * sum, 1.0 / std::log10(static_cast<double>(n * m)));
  return static_cast<double>(n * m) / tau;
}

double effective_sample_size(const PosteriorDraws& draws, Eigen::Index column) {
  return effective_sample_size(draws.column_by_chain(column));
}

}  // namespace brmst
