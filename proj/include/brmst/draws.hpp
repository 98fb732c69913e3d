#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "brmst/model.hpp"

namespace brmst {

/// Kept MCMC draws on the natural scale, one (kept x dim) matrix per chain.
struct PosteriorDraws {
  ModelSpec spec;
  ParamLayout layout;
  std::vector<std::string> columns;
  std::vector<Eigen::MatrixXd> chains;

  /// Post-burn-in acceptance rate per chain and block.
  std::vector<std::string> blocks;
  std::vector<Eigen::VectorXd> acceptance;

  Eigen::Index chain_count() const { return static_cast<Eigen::Index>(chains.size()); }
  Eigen::Index kept() const { return chains.empty() ? 0 : chains.front().rows(); }
  Eigen::Index dim() const { return layout.dim(); }
  Eigen::Index total() const { return kept() * chain_count(); }

  /// All chains stacked in chain order.
  Eigen::MatrixXd pooled() const;
  /// One column pooled across chains.
  Eigen::VectorXd column(Eigen::Index j) const;
  /// One column as a (kept x chains) matrix.
  Eigen::MatrixXd column_by_chain(Eigen::Index j) const;
  /// Throws std::out_of_range for unknown names.
  Eigen::Index column_index(const std::string& name) const;

  /// Throws std::invalid_argument when chains, columns and layout disagree.
  void validate() const;
};

}  // namespace brmst
