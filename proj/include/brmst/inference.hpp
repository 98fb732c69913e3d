#pragma once

#include <Eigen/Core>
#include <vector>

#include "brmst/dataset.hpp"
#include "brmst/model.hpp"

namespace brmst {

/// Censored-data posterior for one dataset and model specification.
///
/// Parameter vectors are on the unconstrained scale described by
/// ParamLayout. Row contributions are delta * log f + (1 - delta) * log S
/// with lambda_ij = exp(x_ij' beta) (exponential, Weibull) or
/// mu_ij = x_ij' beta (log-logistic, log-normal), and the cluster offset or
/// frailty applied through the family's effect handling.
class SurvivalModel {
 public:
  SurvivalModel(SurvivalDataset data, ModelSpec spec);

  const SurvivalDataset& data() const { return data_; }
  const ModelSpec& spec() const { return spec_; }
  const ParamLayout& layout() const { return layout_; }
  const std::vector<Eigen::Index>& cluster_rows(Eigen::Index cluster) const {
    return cluster_rows_[static_cast<std::size_t>(cluster)];
  }

  double row_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& theta, Eigen::Index row) const;
  Eigen::VectorXd pointwise_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& theta) const;
  double log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& theta) const;
  /// Sum over the rows of one cluster.
  double cluster_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& theta, Eigen::Index cluster) const;

  /// Log prior density including the log-Jacobians of log-transformed
  /// coordinates; -infinity outside the support of a uniform prior.
  double log_prior(const Eigen::Ref<const Eigen::VectorXd>& theta) const;
  double log_posterior(const Eigen::Ref<const Eigen::VectorXd>& theta) const;

 private:
  void check(const Eigen::Ref<const Eigen::VectorXd>& theta) const;

  SurvivalDataset data_;
  ModelSpec spec_;
  ParamLayout layout_;
  std::vector<std::vector<Eigen::Index>> cluster_rows_;
};

double log_likelihood(const SurvivalDataset& data, const ModelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& theta);
double log_prior(const SurvivalDataset& data, const ModelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& theta);
double log_posterior(const SurvivalDataset& data, const ModelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& theta);
Eigen::VectorXd pointwise_log_likelihood(const SurvivalDataset& data, const ModelSpec& spec,
                                         const Eigen::Ref<const Eigen::VectorXd>& theta);

}  // namespace brmst
