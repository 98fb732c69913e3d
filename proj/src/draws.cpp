#include "brmst/draws.hpp"

#include <algorithm>
#include <stdexcept>

namespace brmst {

Eigen::MatrixXd PosteriorDraws::pooled() const {
  Eigen::MatrixXd all(total(), dim());
  for (Eigen::Index c = 0; c < chain_count(); ++c) all.middleRows(c * kept(), kept()) = chains[c];
  return all;
}

Eigen::VectorXd PosteriorDraws::column(Eigen::Index j) const {
  Eigen::VectorXd out(total());
  for (Eigen::Index c = 0; c < chain_count(); ++c) out.segment(c * kept(), kept()) = chains[c].col(j);
  return out;
}

Eigen::MatrixXd PosteriorDraws::column_by_chain(Eigen::Index j) const {
  Eigen::MatrixXd out(kept(), chain_count());
  for (Eigen::Index c = 0; c < chain_count(); ++c) out.col(c) = chains[c].col(j);
  return out;
}

Eigen::Index PosteriorDraws::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no posterior column named '" + name + "'");
  return it - columns.begin();
}

void PosteriorDraws::validate() const {
  if (chains.empty()) throw std::invalid_argument("posterior draws have no chains");
  if (static_cast<Eigen::Index>(columns.size()) != layout.dim())
    throw std::invalid_argument("posterior column names do not match the parameter layout");
  if (layout.family() != spec.family || layout.effect() != spec.effect)
    throw std::invalid_argument("posterior layout does not match the model specification");
  for (const auto& chain : chains) {
    if (chain.cols() != layout.dim()) throw std::invalid_argument("posterior chain width does not match the layout");
    if (chain.rows() != kept()) throw std::invalid_argument("posterior chains have unequal lengths");
  }
}

}  // namespace brmst
