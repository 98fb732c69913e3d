#include "brmst/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace brmst {

std::string_view to_string(EffectType effect) {
  switch (effect) {
    case EffectType::None: return "none";
    case EffectType::Random: return "random";
    case EffectType::Frailty: return "frailty";
  }
  return "unknown";
}

EffectType parse_effect(std::string_view name) {
  if (name == "none") return EffectType::None;
  if (name == "random") return EffectType::Random;
  if (name == "frailty") return EffectType::Frailty;
  throw std::invalid_argument("unknown effect type '" + std::string(name) + "'");
}

void Hyperparameters::validate(Eigen::Index covariates) const {
  auto positive = [](double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string("prior ") + what + " must be positive");
  };
  if (coef_variances.size() > 0) {
    if (coef_variances.size() != covariates)
      throw std::invalid_argument("prior coefficient variances do not match the number of covariates");
    for (Eigen::Index j = 0; j < coef_variances.size(); ++j) positive(coef_variances(j), "coefficient variance");
  } else {
    positive(coef_variance, "coefficient variance");
  }
  positive(phi_upper, "phi upper bound");
  positive(shape_a, "shape a");
  positive(shape_b, "shape b");
  positive(sigma2_upper, "sigma2 upper bound");
}

FamilyParams make_family_params(Family family, double eta, double shape) {
  switch (family) {
    case Family::Exponential: return Exponential{std::exp(eta)};
    case Family::Weibull: return Weibull{std::exp(eta), shape};
    case Family::LogLogistic: return LogLogistic{eta, shape};
    case Family::LogNormal: return LogNormal{eta, shape};
  }
  throw std::logic_error("make_family_params: unknown family");
}

ParamLayout::ParamLayout(const ModelSpec& spec, Eigen::Index covariates, Eigen::Index clusters)
    : family_(spec.family), effect_(spec.effect), covariates_(covariates), clusters_(clusters) {
  if (covariates < 1) throw std::invalid_argument("ParamLayout: at least one covariate (the intercept) is required");
  if (clusters < 1) throw std::invalid_argument("ParamLayout: at least one cluster is required");
  Eigen::Index next = covariates;
  if (brmst::has_shape(spec.family)) shape_index_ = next++;
  if (spec.effect != EffectType::None) {
    effect_offset_ = next;
    next += clusters;
    phi_index_ = next++;
  }
  dim_ = next;
}

Eigen::VectorXd ParamLayout::to_natural(const Eigen::Ref<const Eigen::VectorXd>& theta) const {
  if (theta.size() != dim_) throw std::invalid_argument("parameter vector does not match layout");
  Eigen::VectorXd natural = theta;
  if (has_shape()) natural(shape_index_) = std::exp(theta(shape_index_));
  if (has_effects()) {
    if (effect_ == EffectType::Frailty)
      natural.segment(effect_offset_, clusters_) = theta.segment(effect_offset_, clusters_).array().exp().matrix();
    natural(phi_index_) = std::exp(theta(phi_index_));
  }
  return natural;
}

Eigen::VectorXd ParamLayout::to_unconstrained(const Eigen::Ref<const Eigen::VectorXd>& natural) const {
  if (natural.size() != dim_) throw std::invalid_argument("parameter vector does not match layout");
  Eigen::VectorXd theta = natural;
  if (has_shape()) theta(shape_index_) = std::log(natural(shape_index_));
  if (has_effects()) {
    if (effect_ == EffectType::Frailty)
      theta.segment(effect_offset_, clusters_) = natural.segment(effect_offset_, clusters_).array().log().matrix();
    theta(phi_index_) = std::log(natural(phi_index_));
  }
  return theta;
}

std::vector<std::string> ParamLayout::column_names(const std::vector<std::string>& covariate_names,
                                                   const std::vector<std::string>& cluster_labels) const {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(dim_));
  for (Eigen::Index j = 0; j < covariates_; ++j) {
    const auto label = j < static_cast<Eigen::Index>(covariate_names.size()) ? covariate_names[j] : std::to_string(j);
    names.push_back("beta[" + label + "]");
  }
  if (has_shape()) names.emplace_back(family_ == Family::LogNormal ? "sigma2" : "k");
  if (has_effects()) {
    const char* prefix = effect_ == EffectType::Frailty ? "v[" : "u[";
    for (Eigen::Index i = 0; i < clusters_; ++i) {
      const auto label = i < static_cast<Eigen::Index>(cluster_labels.size()) ? cluster_labels[i] : std::to_string(i + 1);
      names.push_back(prefix + label + "]");
    }
    names.emplace_back("phi");
  }
  return names;
}

}  // namespace brmst
