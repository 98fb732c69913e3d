#include "brmst/dataset.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace brmst {

void SurvivalDataset::validate() const {
  const Eigen::Index n = rows();
  if (n == 0) throw std::invalid_argument("dataset has no rows");
  if (event.size() != n || design.rows() != n || cluster.size() != n)
    throw std::invalid_argument("dataset columns have unequal lengths");
  if (design.cols() < 1) throw std::invalid_argument("design matrix needs an intercept column");
  if (static_cast<Eigen::Index>(covariate_names.size()) != design.cols())
    throw std::invalid_argument("covariate names do not match the design matrix");
  if (cluster_labels.empty()) throw std::invalid_argument("dataset has no clusters");
  std::vector<bool> seen(cluster_labels.size(), false);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (!(time(r) > 0.0) || !std::isfinite(time(r)))
      throw std::invalid_argument("row " + std::to_string(r + 1) + ": time must be positive");
    if (event(r) != 0 && event(r) != 1)
      throw std::invalid_argument("row " + std::to_string(r + 1) + ": event must be 0 or 1");
    if (cluster(r) < 0 || cluster(r) >= clusters())
      throw std::invalid_argument("row " + std::to_string(r + 1) + ": cluster index out of range");
    seen[static_cast<std::size_t>(cluster(r))] = true;
    if (!design.row(r).allFinite())
      throw std::invalid_argument("row " + std::to_string(r + 1) + ": non-finite covariate");
  }
  for (bool s : seen)
    if (!s) throw std::invalid_argument("cluster indices are not contiguous");
}

SurvivalDataset SurvivalDataset::subset(const SurvivalDataset& source, const std::vector<Eigen::Index>& rows) {
  SurvivalDataset out;
  const auto n = static_cast<Eigen::Index>(rows.size());
  out.time.resize(n);
  out.event.resize(n);
  out.design.resize(n, source.design.cols());
  out.cluster.resize(n);
  out.covariate_names = source.covariate_names;
  std::map<int, int> renumber;
  for (Eigen::Index r : rows) renumber.emplace(source.cluster(r), 0);
  int next = 0;
  for (auto& [old_index, new_index] : renumber) {
    new_index = next++;
    out.cluster_labels.push_back(source.cluster_labels[static_cast<std::size_t>(old_index)]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = rows[static_cast<std::size_t>(i)];
    out.time(i) = source.time(r);
    out.event(i) = source.event(r);
    out.design.row(i) = source.design.row(r);
    out.cluster(i) = renumber.at(source.cluster(r));
  }
  return out;
}

bool operator==(const SurvivalDataset& a, const SurvivalDataset& b) {
  return a.time.size() == b.time.size() && a.design.rows() == b.design.rows() &&
         a.design.cols() == b.design.cols() && a.time == b.time && a.event == b.event && a.design == b.design &&
         a.cluster == b.cluster && a.covariate_names == b.covariate_names && a.cluster_labels == b.cluster_labels;
}

}  // namespace brmst
