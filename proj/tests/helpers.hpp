#pragma once

#include <string>
#include <vector>

#include "brmst/draws.hpp"

namespace testing_support {

/// Draws object around hand-made natural-scale chains.
inline brmst::PosteriorDraws make_draws(const brmst::ModelSpec& spec, Eigen::Index q, Eigen::Index clusters,
                                        std::vector<Eigen::MatrixXd> chains) {
  brmst::PosteriorDraws d;
  d.spec = spec;
  d.layout = brmst::ParamLayout(spec, q, clusters);
  std::vector<std::string> covs, labels;
  for (Eigen::Index j = 0; j < q; ++j) covs.push_back("x" + std::to_string(j));
  for (Eigen::Index i = 0; i < clusters; ++i) labels.push_back(std::to_string(i + 1));
  d.columns = d.layout.column_names(covs, labels);
  d.chains = std::move(chains);
  return d;
}

}  // namespace testing_support
