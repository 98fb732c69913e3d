#include <cmath>
#include <limits>

#include "brmst/diagnostics.hpp"
#include "brmst/rng.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace brmst;

namespace {

Eigen::MatrixXd normals(Eigen::Index n, Eigen::Index chains, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  Eigen::MatrixXd m(n, chains);
  for (Eigen::Index c = 0; c < chains; ++c)
    for (Eigen::Index i = 0; i < n; ++i) m(i, c) = rng.normal();
  return m;
}

Eigen::MatrixXd ar1(Eigen::Index n, Eigen::Index chains, double rho, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  Eigen::MatrixXd m(n, chains);
  const double innovation = std::sqrt(1.0 - rho * rho);
  for (Eigen::Index c = 0; c < chains; ++c) {
    double x = rng.normal();
    for (Eigen::Index i = 0; i < n; ++i) {
      x = rho * x + innovation * rng.normal();
      m(i, c) = x;
    }
  }
  return m;
}

// Straightforward split-Rhat written out half by half.
double reference_rhat(const Eigen::MatrixXd& m) {
  const Eigen::Index half = m.rows() / 2;
  std::vector<Eigen::VectorXd> parts;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    parts.push_back(m.col(c).head(half));
    parts.push_back(m.col(c).segment(m.rows() - half, half));
  }
  const double n = static_cast<double>(half);
  double grand = 0.0, w = 0.0;
  std::vector<double> means;
  for (const auto& p : parts) {
    means.push_back(p.mean());
    grand += p.mean();
    w += (p.array() - p.mean()).square().sum() / (n - 1.0);
  }
  const double k = static_cast<double>(parts.size());
  grand /= k;
  w /= k;
  double b = 0.0;
  for (double mu : means) b += (mu - grand) * (mu - grand);
  b *= n / (k - 1.0);
  return std::sqrt(((n - 1.0) / n * w + b / n) / w);
}

}  // namespace

TEST_CASE("split-Rhat agrees with a direct evaluation") {
  const Eigen::MatrixXd m = ar1(400, 3, 0.5, 1);
  CHECK(split_rhat(m) == doctest::Approx(reference_rhat(m)).epsilon(1e-12));
  Eigen::MatrixXd odd = ar1(401, 2, 0.5, 2);
  CHECK(split_rhat(odd) == doctest::Approx(reference_rhat(odd)).epsilon(1e-12));
}

TEST_CASE("split-Rhat on well mixed, constant and separated chains") {
  CHECK(split_rhat(normals(1000, 4, 3)) < 1.05);
  CHECK(split_rhat(Eigen::MatrixXd::Constant(500, 4, 2.5)) == 1.0);
  Eigen::MatrixXd shifted = normals(1000, 4, 4);
  shifted.col(0).array() += 5.0;
  CHECK(split_rhat(shifted) > 1.5);
  Eigen::MatrixXd flat(200, 2);
  flat.col(0).setConstant(1.0);
  flat.col(1).setConstant(2.0);
  CHECK(split_rhat(flat) == std::numeric_limits<double>::infinity());
  // a trend inside each chain is caught by splitting
  Eigen::MatrixXd trend(1000, 2);
  for (Eigen::Index i = 0; i < 1000; ++i) trend.row(i).setConstant(i / 100.0);
  trend += 0.1 * normals(1000, 2, 5);
  CHECK(split_rhat(trend) > 1.5);
}

TEST_CASE("ESS of white noise is close to the draw count") {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const double ess = effective_sample_size(normals(1000, 4, seed));
    CHECK(ess > 0.5 * 4000.0);
    CHECK(ess < 1.5 * 4000.0);
  }
}

TEST_CASE("ESS of an AR(1) chain matches N (1 - rho) / (1 + rho)") {
  const double rho = 0.9;
  const double expected = 20000.0 * (1.0 - rho) / (1.0 + rho);
  for (std::uint64_t seed = 20; seed < 23; ++seed) {
    const double ess = effective_sample_size(ar1(5000, 4, rho, seed));
    CHECK(ess > expected / 2.0);
    CHECK(ess < expected * 2.0);
  }
  CHECK(effective_sample_size(ar1(5000, 4, 0.5, 30)) > effective_sample_size(ar1(5000, 4, 0.95, 30)));
}

TEST_CASE("ESS of constant draws is zero") {
  CHECK(effective_sample_size(Eigen::MatrixXd::Constant(200, 2, 7.0)) == 0.0);
}

TEST_CASE("diagnostics reject short or non-finite input") {
  CHECK_THROWS_AS(split_rhat(normals(40, 2, 6)), DiagnosticsError);
  CHECK_THROWS_AS(effective_sample_size(normals(99, 1, 6)), DiagnosticsError);
  CHECK_NOTHROW(effective_sample_size(normals(100, 1, 6)));
  Eigen::MatrixXd bad = normals(200, 2, 7);
  bad(3, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(split_rhat(bad), DiagnosticsError);
}

TEST_CASE("draws overloads read one column across chains") {
  const ModelSpec spec{Family::Weibull, EffectType::None, {}};
  std::vector<Eigen::MatrixXd> chains;
  for (std::uint64_t c = 0; c < 3; ++c) {
    Eigen::MatrixXd m = normals(300, 3, 40 + c);
    m.col(2) = m.col(2).array().exp();
    chains.push_back(m);
  }
  const auto draws = testing_support::make_draws(spec, 2, 1, chains);
  const Eigen::MatrixXd by_chain = draws.column_by_chain(1);
  CHECK(split_rhat(draws, 1) == split_rhat(by_chain));
  CHECK(effective_sample_size(draws, 1) == effective_sample_size(by_chain));
}
