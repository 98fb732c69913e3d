#include "brmst/inference.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "brmst/families.hpp"
#include "brmst/specfun.hpp"

namespace brmst {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_gamma_density(double x, double shape, double rate) {
  return shape * std::log(rate) - specfun::ln_gamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double log_normal_density(double x, double variance) {
  return -0.5 * x * x / variance - 0.5 * std::log(2.0 * std::numbers::pi * variance);
}

}  // namespace

SurvivalModel::SurvivalModel(SurvivalDataset data, ModelSpec spec)
    : data_(std::move(data)), spec_(std::move(spec)) {
  data_.validate();
  spec_.prior.validate(data_.covariates());
  layout_ = ParamLayout(spec_, data_.covariates(), data_.clusters());
  cluster_rows_.resize(static_cast<std::size_t>(data_.clusters()));
  for (Eigen::Index r = 0; r < data_.rows(); ++r) cluster_rows_[static_cast<std::size_t>(data_.cluster(r))].push_back(r);
}

void SurvivalModel::check(const Eigen::Ref<const Eigen::VectorXd>& theta) const {
  if (theta.size() != layout_.dim()) throw std::invalid_argument("parameter vector does not match the model layout");
}

double SurvivalModel::row_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& theta, Eigen::Index row) const {
  const Eigen::Index q = layout_.covariates();
  const double eta = data_.design.row(row).dot(theta.head(q));
  const double shape = layout_.has_shape() ? std::exp(theta(layout_.shape_index())) : 1.0;
  const FamilyParams params = make_family_params(spec_.family, eta, shape);

  EffectValue effect = NoEffect{};
  if (layout_.has_effects()) {
    const double e = theta(layout_.effect_offset() + data_.cluster(row));
    if (spec_.effect == EffectType::Random)
      effect = RandomOffset{e};
    else
      effect = Frailty{std::exp(e)};
  }
  const double t = data_.time(row);
  return data_.event(row) == 1 ? log_density(params, effect, t) : log_survival(params, effect, t);
}

Eigen::VectorXd SurvivalModel::pointwise_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& theta) const {
  check(theta);
  Eigen::VectorXd out(data_.rows());
  for (Eigen::Index r = 0; r < data_.rows(); ++r) out(r) = row_log_likelihood(theta, r);
  return out;
}

double SurvivalModel::log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& theta) const {
  check(theta);
  double total = 0.0;
  for (Eigen::Index r = 0; r < data_.rows(); ++r) total += row_log_likelihood(theta, r);
  return total;
}

double SurvivalModel::cluster_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& theta, Eigen::Index cluster) const {
  check(theta);
  double total = 0.0;
  for (Eigen::Index r : cluster_rows(cluster)) total += row_log_likelihood(theta, r);
  return total;
}

double SurvivalModel::log_prior(const Eigen::Ref<const Eigen::VectorXd>& theta) const {
  check(theta);
  const Hyperparameters& prior = spec_.prior;
  double lp = 0.0;
  for (Eigen::Index j = 0; j < layout_.covariates(); ++j) lp += log_normal_density(theta(j), prior.variance_of(j));

  if (layout_.has_shape()) {
    const double log_shape = theta(layout_.shape_index());
    const double shape = std::exp(log_shape);
    if (spec_.family == Family::LogNormal) {
      if (!(shape < prior.sigma2_upper)) return kNegInf;
      lp += -std::log(prior.sigma2_upper) + log_shape;
    } else {
      lp += log_gamma_density(shape, prior.shape_a, prior.shape_b) + log_shape;
    }
  }

  if (layout_.has_effects()) {
    const double log_phi = theta(layout_.phi_index());
    const double phi = std::exp(log_phi);
    if (!(phi < prior.phi_upper) || !(phi > 0.0)) return kNegInf;
    lp += -std::log(prior.phi_upper) + log_phi;
    const auto effects = theta.segment(layout_.effect_offset(), layout_.clusters());
    if (spec_.effect == EffectType::Random) {
      for (Eigen::Index i = 0; i < effects.size(); ++i) lp += log_normal_density(effects(i), phi * phi);
    } else {
      const double shape = 1.0 / phi;
      for (Eigen::Index i = 0; i < effects.size(); ++i)
        lp += log_gamma_density(std::exp(effects(i)), shape, shape) + effects(i);
    }
  }
  return std::isnan(lp) ? kNegInf : lp;
}

double SurvivalModel::log_posterior(const Eigen::Ref<const Eigen::VectorXd>& theta) const {
  const double lp = log_prior(theta);
  if (lp == kNegInf) return kNegInf;
  const double ll = log_likelihood(theta);
  return std::isnan(ll) ? kNegInf : ll + lp;
}

double log_likelihood(const SurvivalDataset& data, const ModelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& theta) {
  return SurvivalModel(data, spec).log_likelihood(theta);
}

double log_prior(const SurvivalDataset& data, const ModelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& theta) {
  return SurvivalModel(data, spec).log_prior(theta);
}

double log_posterior(const SurvivalDataset& data, const ModelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& theta) {
  return SurvivalModel(data, spec).log_posterior(theta);
}

Eigen::VectorXd pointwise_log_likelihood(const SurvivalDataset& data, const ModelSpec& spec,
                                         const Eigen::Ref<const Eigen::VectorXd>& theta) {
  return SurvivalModel(data, spec).pointwise_log_likelihood(theta);
}

}  // namespace brmst
