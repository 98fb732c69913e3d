#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>
#include <vector>

#include "brmst/families.hpp"

namespace brmst {

enum class EffectType { None, Random, Frailty };

std::string_view to_string(EffectType effect);
/// Accepts "none", "random", "frailty".
EffectType parse_effect(std::string_view name);

/// Prior hyperparameters. beta_j ~ N(0, c_j); phi ~ U(0, phi_upper);
/// k ~ Gamma(shape_a, rate shape_b); sigma2 ~ U(0, sigma2_upper).
struct Hyperparameters {
  double coef_variance = 100.0;
  /// Per-coefficient override of coef_variance; empty means all equal.
  Eigen::VectorXd coef_variances;
  double phi_upper = 10.0;
  double shape_a = 0.01;
  double shape_b = 0.01;
  double sigma2_upper = 100.0;

  double variance_of(Eigen::Index j) const {
    return coef_variances.size() > 0 ? coef_variances(j) : coef_variance;
  }
  void validate(Eigen::Index covariates) const;
};

struct ModelSpec {
  Family family = Family::Exponential;
  EffectType effect = EffectType::None;
  Hyperparameters prior;
};

/// Weibull and log-logistic carry a shape k, log-normal a variance sigma2.
inline bool has_shape(Family family) { return family != Family::Exponential; }

/// Per-row distribution from a linear predictor: lambda = exp(eta) for
/// exponential/Weibull, mu = eta for log-logistic/log-normal. `shape` is k
/// or sigma2 and is ignored for the exponential.
FamilyParams make_family_params(Family family, double eta, double shape);

/// Coordinate layout of a parameter vector.
///
///   [ beta_0 .. beta_{q-1} | shape | effect_1 .. effect_M | phi ]
///
/// On the unconstrained (sampling) scale the shape, phi and frailties are
/// stored as logs; random offsets u_i are stored as is. The natural scale
/// holds k, sigma2, v_i and phi themselves.
class ParamLayout {
 public:
  ParamLayout() = default;
  ParamLayout(const ModelSpec& spec, Eigen::Index covariates, Eigen::Index clusters);

  Eigen::Index dim() const { return dim_; }
  Eigen::Index covariates() const { return covariates_; }
  Eigen::Index clusters() const { return clusters_; }
  bool has_shape() const { return shape_index_ >= 0; }
  bool has_effects() const { return effect_offset_ >= 0; }
  Eigen::Index shape_index() const { return shape_index_; }
  Eigen::Index effect_offset() const { return effect_offset_; }
  Eigen::Index phi_index() const { return phi_index_; }
  EffectType effect() const { return effect_; }
  Family family() const { return family_; }

  Eigen::VectorXd to_natural(const Eigen::Ref<const Eigen::VectorXd>& theta) const;
  Eigen::VectorXd to_unconstrained(const Eigen::Ref<const Eigen::VectorXd>& natural) const;

  /// Column names on the natural scale, e.g. "beta[group]", "k", "u[2]", "phi".
  std::vector<std::string> column_names(const std::vector<std::string>& covariate_names,
                                        const std::vector<std::string>& cluster_labels) const;

 private:
  Family family_ = Family::Exponential;
  EffectType effect_ = EffectType::None;
  Eigen::Index covariates_ = 0;
  Eigen::Index clusters_ = 0;
  Eigen::Index shape_index_ = -1;
  Eigen::Index effect_offset_ = -1;
  Eigen::Index phi_index_ = -1;
  Eigen::Index dim_ = 0;
};

}  // namespace brmst
