#include "brmst/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brmst {

namespace {

std::vector<double> sorted_copy(const Eigen::Ref<const Eigen::VectorXd>& v) {
  std::vector<double> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v(i);
  std::sort(out.begin(), out.end());
  return out;
}

double sample_sd(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size() - 1));
}

void require_finite(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() == 0) throw std::invalid_argument("empty sample");
  if (!v.allFinite()) throw std::invalid_argument("sample contains non-finite values");
}

}  // namespace

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile probability outside [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double quantile(const Eigen::Ref<const Eigen::VectorXd>& v, double p) {
  require_finite(v);
  return quantile_sorted(sorted_copy(v), p);
}

double silverman_bandwidth(const Eigen::Ref<const Eigen::VectorXd>& v) {
  require_finite(v);
  const std::vector<double> s = sorted_copy(v);
  const double sd = sample_sd(v);
  const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(v.size()), -0.2);
}

double kde_mode(const Eigen::Ref<const Eigen::VectorXd>& v, int grid_points) {
  require_finite(v);
  if (grid_points < 2) throw std::invalid_argument("kde_mode needs at least two grid points");
  const double lo = v.minCoeff();
  const double hi = v.maxCoeff();
  const double h = silverman_bandwidth(v);
  if (hi == lo || !(h > 0.0)) return lo;
  const std::vector<double> s = sorted_copy(v);
  double best_x = lo;
  double best_density = -1.0;
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);
  const double cutoff = 8.0 * h;  // kernel weight below e^-32 is ignored
  for (int g = 0; g < grid_points; ++g) {
    const double x = g == grid_points - 1 ? hi : lo + step * g;
    auto first = std::lower_bound(s.begin(), s.end(), x - cutoff);
    auto last = std::upper_bound(first, s.end(), x + cutoff);
    double density = 0.0;
    for (auto it = first; it != last; ++it) {
      const double z = (x - *it) / h;
      density += std::exp(-0.5 * z * z);
    }
    if (density > best_density) {
      best_density = density;
      best_x = x;
    }
  }
  return best_x;
}

RmstSummary summarize(const Eigen::Ref<const Eigen::VectorXd>& v, double level, const std::vector<double>& thresholds) {
  require_finite(v);
  if (v.size() < 10) throw std::invalid_argument("summarize needs at least 10 values");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("credible level must lie in (0, 1)");
  const std::vector<double> s = sorted_copy(v);
  RmstSummary out;
  out.mean = v.mean();
  out.median = quantile_sorted(s, 0.5);
  out.sd = sample_sd(v);
  out.mode = kde_mode(v);
  out.interval = {level, quantile_sorted(s, 0.5 * (1.0 - level)), quantile_sorted(s, 0.5 * (1.0 + level))};
  const double n = static_cast<double>(s.size());
  for (double t : thresholds) {
    const auto below = std::lower_bound(s.begin(), s.end(), t) - s.begin();
    out.exceedance.push_back({t, static_cast<double>(below) / n});
  }
  return out;
}

std::vector<ForestRow> forest_rows(const std::vector<std::string>& labels, const std::vector<RmstSummary>& clusters,
                                   const RmstSummary& marginal) {
  if (labels.size() != clusters.size()) throw std::invalid_argument("forest_rows: labels and summaries differ in length");
  std::vector<ForestRow> rows;
  for (std::size_t i = 0; i < clusters.size(); ++i)
    rows.push_back({labels[i], clusters[i].mean, clusters[i].interval.lo, clusters[i].interval.hi});
  if (clusters.size() != 1) rows.push_back({"marginal", marginal.mean, marginal.interval.lo, marginal.interval.hi});
  return rows;
}

Histogram histogram_bins(const Eigen::Ref<const Eigen::VectorXd>& v, int bins) {
  require_finite(v);
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  const double lo = v.minCoeff();
  const double hi = v.maxCoeff();
  Histogram out;
  if (hi == lo) {
    out.edges = {lo, hi};
    out.counts = {static_cast<long>(v.size())};
    return out;
  }
  out.counts.assign(static_cast<std::size_t>(bins), 0);
  out.edges.resize(static_cast<std::size_t>(bins) + 1);
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) out.edges[static_cast<std::size_t>(b)] = b == bins ? hi : lo + width * b;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    auto b = static_cast<int>(std::floor((v(i) - lo) / width));
    b = std::clamp(b, 0, bins - 1);
    // Keep the bin consistent with the stored edges despite rounding.
    while (b > 0 && v(i) < out.edges[static_cast<std::size_t>(b)]) --b;
    while (b < bins - 1 && v(i) >= out.edges[static_cast<std::size_t>(b) + 1]) ++b;
    ++out.counts[static_cast<std::size_t>(b)];
  }
  return out;
}

}  // namespace brmst
