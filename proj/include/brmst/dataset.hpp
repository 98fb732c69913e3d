#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace brmst {

/// Right-censored survival data with a design matrix and cluster labels.
///
/// Column 0 of the design is the intercept and column 1 the group
/// indicator. Clusters are stored 0-based; `cluster_labels[i]` is the
/// external label of cluster i.
struct SurvivalDataset {
  Eigen::VectorXd time;
  Eigen::VectorXi event;
  Eigen::MatrixXd design;
  Eigen::VectorXi cluster;
  std::vector<std::string> covariate_names;
  std::vector<std::string> cluster_labels;

  Eigen::Index rows() const { return time.size(); }
  Eigen::Index covariates() const { return design.cols(); }
  Eigen::Index clusters() const { return static_cast<Eigen::Index>(cluster_labels.size()); }

  /// Throws std::invalid_argument on any broken invariant.
  void validate() const;

  /// Rows of `source` selected by index, clusters renumbered to the ones present.
  static SurvivalDataset subset(const SurvivalDataset& source, const std::vector<Eigen::Index>& rows);

  friend bool operator==(const SurvivalDataset& a, const SurvivalDataset& b);
};

}  // namespace brmst
