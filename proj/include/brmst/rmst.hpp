#pragma once

#include <Eigen/Core>
#include <optional>

#include "brmst/draws.hpp"
#include "brmst/families.hpp"
#include "brmst/quadrature.hpp"

namespace brmst {

struct RmstOptions {
  /// The log-normal frailty closed form is an approximation. When set, the
  /// exact integral of S(t)^v is computed by quadrature instead.
  bool exact_lognormal_frailty = false;
  SimpsonOptions quadrature;
};

// Closed-form restricted mean survival time int_0^tau S(t) dt.

double rmst_exponential(double lambda, double tau);
double rmst_weibull(double lambda, double k, double tau);
/// Closed form for k > 1; quadrature for k <= 1.
double rmst_loglogistic(double mu, double k, double tau);
double rmst_lognormal(double mu, double sigma2, double tau);

double rmst(const FamilyParams& params, double tau);

/// RMST of S(t | v) = S(t)^v. Exact for exponential, Weibull and
/// log-logistic; the log-normal expression replaces (1 - Phi(y + sigma))^(v-1)
/// by (1 - Phi(y))^(v-1) inside the integral unless options ask for the
/// exact value.
double rmst_frailty(const FamilyParams& params, double v, double tau, const RmstOptions& options = {});

/// RMST with the random offset u folded into the linear-scale parameter.
double rmst_random_effect(const FamilyParams& params, double u, double tau);

double rmst(const FamilyParams& params, const EffectValue& effect, double tau, const RmstOptions& options = {});

/// int_0^tau exp(log_survival(t)) dt by adaptive Simpson quadrature.
double rmst_numeric(const FamilyParams& params, const EffectValue& effect, double tau,
                    const SimpsonOptions& options = {});

// Time-scale parameterizations, evaluated with their own closed forms.

double rmst_alternate(const WeibullAlt& params, double tau);
double rmst_alternate(const LogLogisticAlt& params, double tau);
double rmst_alternate_frailty(const WeibullAlt& params, double v, double tau);
double rmst_alternate_frailty(const LogLogisticAlt& params, double v, double tau);

enum class SampleLabel { Group0, Group1, Difference };

/// Per-draw RMST values aligned with the pooled draw order.
struct RmstSampleVector {
  SampleLabel label;
  Eigen::VectorXd values;
};

struct RmstQuery {
  double tau = 100.0;
  /// Column of the design holding the group indicator.
  Eigen::Index group_column = 1;
  /// Reference design row; the group entry is overwritten with 0 and 1.
  /// Empty means the intercept alone.
  Eigen::VectorXd covariates;
  /// Cluster-specific RMST (0-based cluster index); marginal when empty.
  std::optional<Eigen::Index> cluster;
  RmstOptions options;
};

struct RmstDistribution {
  RmstSampleVector group0{SampleLabel::Group0, {}};
  RmstSampleVector group1{SampleLabel::Group1, {}};
  /// Elementwise group1 - group0.
  RmstSampleVector difference{SampleLabel::Difference, {}};
};

RmstDistribution rmst_distribution(const PosteriorDraws& draws, const RmstQuery& query);

}  // namespace brmst
