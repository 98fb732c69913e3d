#include "brmst/waic.hpp"

#include <cmath>
#include <stdexcept>

#include "brmst/inference.hpp"

namespace brmst {

WaicResult waic(const Eigen::Ref<const Eigen::MatrixXd>& log_lik) {
  if (log_lik.rows() < 1 || log_lik.cols() < 1) throw std::invalid_argument("waic: empty log-likelihood matrix");
  if (!log_lik.allFinite()) throw std::invalid_argument("waic: non-finite pointwise log-likelihood");
  const double s = static_cast<double>(log_lik.rows());
  WaicResult out;
  out.pointwise.resize(log_lik.cols());
  bool any_variance = false;
  for (Eigen::Index i = 0; i < log_lik.cols(); ++i) {
    const auto col = log_lik.col(i);
    const double max = col.maxCoeff();
    const double lppd_i = max + std::log((col.array() - max).exp().sum() / s);
    // a constant column must give exactly zero, which the mean's rounding would spoil
    const double p_i = col.minCoeff() == max ? 0.0 : (col.array() - col.mean()).square().sum() / s;
    if (p_i > 0.0) any_variance = true;
    out.lppd += lppd_i;
    out.p_waic += p_i;
    out.pointwise(i) = -2.0 * (lppd_i - p_i);
  }
  out.degenerate = !any_variance;
  out.waic = -2.0 * (out.lppd - out.p_waic);
  return out;
}

Eigen::MatrixXd pointwise_log_likelihood(const SurvivalDataset& data, const PosteriorDraws& draws) {
  draws.validate();
  const SurvivalModel model(data, draws.spec);
  if (model.layout().dim() != draws.dim()) throw std::invalid_argument("waic: draws do not match the dataset layout");
  const Eigen::MatrixXd pooled = draws.pooled();
  Eigen::MatrixXd out(pooled.rows(), data.rows());
  for (Eigen::Index s = 0; s < pooled.rows(); ++s) {
    const Eigen::VectorXd theta = model.layout().to_unconstrained(pooled.row(s).transpose());
    out.row(s) = model.pointwise_log_likelihood(theta).transpose();
  }
  return out;
}

WaicResult waic(const SurvivalDataset& data, const PosteriorDraws& draws) {
  if (draws.total() < 100) throw std::invalid_argument("waic: at least 100 draws are required");
  return waic(pointwise_log_likelihood(data, draws));
}

}  // namespace brmst
