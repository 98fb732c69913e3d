#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace brmst {

struct Interval {
  double level = 0.95;
  double lo = 0.0;
  double hi = 0.0;
};

struct Exceedance {
  double threshold;
  /// Fraction of values strictly below the threshold.
  double probability;
};

struct RmstSummary {
  double mean = 0.0;
  double median = 0.0;
  double mode = 0.0;
  double sd = 0.0;
  Interval interval;
  std::vector<Exceedance> exceedance;
};

/// Sample quantile with linear interpolation between order statistics
/// (R type 7). `sorted` must be in ascending order.
double quantile_sorted(const std::vector<double>& sorted, double p);
double quantile(const Eigen::Ref<const Eigen::VectorXd>& v, double p);

/// Silverman bandwidth 0.9 min(sd, IQR / 1.34) n^(-1/5); falls back to sd
/// when the IQR is zero.
double silverman_bandwidth(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Argmax of a Gaussian KDE evaluated on `grid_points` evenly spaced points
/// over [min, max].
double kde_mode(const Eigen::Ref<const Eigen::VectorXd>& v, int grid_points = 512);

/// Requires at least 10 values and level in (0, 1).
RmstSummary summarize(const Eigen::Ref<const Eigen::VectorXd>& v, double level = 0.95,
                      const std::vector<double>& thresholds = {});

struct ForestRow {
  std::string label;
  double mean;
  double lo;
  double hi;
};

/// One row per cluster in the given order, followed by the marginal row
/// when there is more than one cluster.
std::vector<ForestRow> forest_rows(const std::vector<std::string>& labels, const std::vector<RmstSummary>& clusters,
                                   const RmstSummary& marginal);

struct Histogram {
  std::vector<double> edges;
  std::vector<long> counts;
};

/// Uniform bins over [min, max]; the last bin is closed. A constant input
/// gives one bin.
Histogram histogram_bins(const Eigen::Ref<const Eigen::VectorXd>& v, int bins);

}  // namespace brmst
