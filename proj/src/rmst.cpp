#include "brmst/rmst.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "brmst/specfun.hpp"

namespace brmst {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error(std::string(what) + " must be positive and finite");
}

double clamp_to_horizon(double value, double tau) { return std::clamp(value, 0.0, tau); }

// Weibull RMST for S(t) = exp(-rate t^k); frailty enters through the rate.
double weibull_closed(double rate, double k, double tau) {
  const double z = rate * std::pow(tau, k);
  const double head = std::pow(rate, -1.0 / k) * specfun::lower_incomplete_gamma(z, 1.0 / k + 1.0);
  return clamp_to_horizon(head + tau * std::exp(-z), tau);
}

// Log-logistic RMST for S(t) = (1 + e^mu t^k)^-v.
double loglogistic_closed(double mu, double k, double v, double tau) {
  const double log_x = mu + k * std::log(tau);
  double z, one_minus_z;
  if (log_x > 0.0) {
    const double inv = std::exp(-log_x);
    z = 1.0 / (1.0 + inv);
    one_minus_z = inv / (1.0 + inv);
  } else {
    const double x = std::exp(log_x);
    z = x / (1.0 + x);
    one_minus_z = 1.0 / (1.0 + x);
  }
  const double b = specfun::incomplete_beta(z, one_minus_z, 1.0 + 1.0 / k, v - 1.0 / k);
  const double head = v * std::exp(-mu / k) * b;
  return clamp_to_horizon(head + tau * std::exp(-v * softplus(log_x)), tau);
}

double lognormal_frailty_approx(double mu, double sigma2, double v, double tau) {
  const double sigma = std::sqrt(sigma2);
  const double log_tau = std::log(tau);
  const double z_mean = (log_tau - mu - sigma2) / sigma;
  const double z_tau = (log_tau - mu) / sigma;
  const double mass = -std::expm1(v * specfun::log_std_normal_sf(z_mean)) / v;
  const double head = std::exp(mu + 0.5 * sigma2) * mass;
  return clamp_to_horizon(head + tau * std::exp(v * specfun::log_std_normal_sf(z_tau)), tau);
}

}  // namespace

double rmst_exponential(double lambda, double tau) {
  require_positive(lambda, "lambda");
  require_positive(tau, "tau");
  return clamp_to_horizon(-std::expm1(-lambda * tau) / lambda, tau);
}

double rmst_weibull(double lambda, double k, double tau) {
  require_positive(lambda, "lambda");
  require_positive(k, "k");
  require_positive(tau, "tau");
  return weibull_closed(lambda, k, tau);
}

double rmst_loglogistic(double mu, double k, double tau) {
  if (!std::isfinite(mu)) throw std::domain_error("mu must be finite");
  require_positive(k, "k");
  require_positive(tau, "tau");
  if (k > 1.0) return loglogistic_closed(mu, k, 1.0, tau);
  return rmst_numeric(LogLogistic{mu, k}, NoEffect{}, tau);
}

double rmst_lognormal(double mu, double sigma2, double tau) {
  if (!std::isfinite(mu)) throw std::domain_error("mu must be finite");
  require_positive(sigma2, "sigma2");
  require_positive(tau, "tau");
  const double sigma = std::sqrt(sigma2);
  const double log_tau = std::log(tau);
  const double head = std::exp(mu + 0.5 * sigma2) * specfun::std_normal_cdf((log_tau - mu - sigma2) / sigma);
  const double tail = tau * std::exp(specfun::log_std_normal_sf((log_tau - mu) / sigma));
  return clamp_to_horizon(head + tail, tau);
}

double rmst(const FamilyParams& params, double tau) {
  return std::visit(overloaded{[&](const Exponential& p) { return rmst_exponential(p.lambda, tau); },
                               [&](const Weibull& p) { return rmst_weibull(p.lambda, p.k, tau); },
                               [&](const LogLogistic& p) { return rmst_loglogistic(p.mu, p.k, tau); },
                               [&](const LogNormal& p) { return rmst_lognormal(p.mu, p.sigma2, tau); }},
                    params);
}

double rmst_frailty(const FamilyParams& params, double v, double tau, const RmstOptions& options) {
  validate(params);
  require_positive(v, "frailty");
  require_positive(tau, "tau");
  if (v == 1.0) return rmst(params, tau);
  return std::visit(
      overloaded{[&](const Exponential& p) { return rmst_exponential(v * p.lambda, tau); },
                 [&](const Weibull& p) { return weibull_closed(v * p.lambda, p.k, tau); },
                 [&](const LogLogistic& p) { return loglogistic_closed(p.mu, p.k, v, tau); },
                 [&](const LogNormal& p) {
                   if (options.exact_lognormal_frailty) return rmst_numeric(p, Frailty{v}, tau, options.quadrature);
                   return lognormal_frailty_approx(p.mu, p.sigma2, v, tau);
                 }},
      params);
}

double rmst_random_effect(const FamilyParams& params, double u, double tau) {
  if (!std::isfinite(u)) throw std::domain_error("random effect must be finite");
  validate(params);
  return rmst(apply_offset(params, u), tau);
}

double rmst(const FamilyParams& params, const EffectValue& effect, double tau, const RmstOptions& options) {
  return std::visit(overloaded{[&](NoEffect) {
                                 validate(params);
                                 return rmst(params, tau);
                               },
                               [&](RandomOffset r) { return rmst_random_effect(params, r.u, tau); },
                               [&](Frailty f) { return rmst_frailty(params, f.v, tau, options); }},
                    effect);
}

double rmst_numeric(const FamilyParams& params, const EffectValue& effect, double tau, const SimpsonOptions& options) {
  validate(params);
  require_positive(tau, "tau");
  const auto integrand = [&](double t) { return t > 0.0 ? std::exp(log_survival(params, effect, t)) : 1.0; };
  return adaptive_simpson(integrand, 0.0, tau, options);
}

double rmst_alternate(const WeibullAlt& params, double tau) { return rmst_alternate_frailty(params, 1.0, tau); }

double rmst_alternate(const LogLogisticAlt& params, double tau) {
  require_positive(params.alpha, "alpha");
  require_positive(params.k, "k");
  require_positive(tau, "tau");
  if (params.k <= 1.0) return rmst_numeric(to_standard(params), NoEffect{}, tau);
  return rmst_alternate_frailty(params, 1.0, tau);
}

double rmst_alternate_frailty(const WeibullAlt& params, double v, double tau) {
  require_positive(params.scale, "scale");
  require_positive(params.k, "k");
  require_positive(v, "frailty");
  require_positive(tau, "tau");
  const double z = v * std::pow(tau / params.scale, params.k);
  const double head = std::pow(v, -1.0 / params.k) * params.scale *
                      specfun::lower_incomplete_gamma(z, 1.0 / params.k + 1.0);
  return clamp_to_horizon(head + tau * std::exp(-z), tau);
}

double rmst_alternate_frailty(const LogLogisticAlt& params, double v, double tau) {
  require_positive(params.alpha, "alpha");
  require_positive(params.k, "k");
  require_positive(v, "frailty");
  require_positive(tau, "tau");
  const double log_x = params.k * (std::log(tau) - std::log(params.alpha));
  const double z = 1.0 / (1.0 + std::exp(-log_x));
  const double one_minus_z = 1.0 / (1.0 + std::exp(log_x));
  const double b = specfun::incomplete_beta(z, one_minus_z, 1.0 + 1.0 / params.k, v - 1.0 / params.k);
  return clamp_to_horizon(params.alpha * v * b + tau * std::exp(-v * softplus(log_x)), tau);
}

RmstDistribution rmst_distribution(const PosteriorDraws& draws, const RmstQuery& query) {
  draws.validate();
  require_positive(query.tau, "tau");
  const ParamLayout& layout = draws.layout;
  const Eigen::Index q = layout.covariates();
  if (query.group_column < 0 || query.group_column >= q)
    throw std::invalid_argument("rmst_distribution: group column outside the design");
  Eigen::VectorXd x = query.covariates;
  if (x.size() == 0) x = Eigen::VectorXd::Unit(q, 0);
  if (x.size() != q) throw std::invalid_argument("rmst_distribution: covariate row does not match the design");
  if (query.cluster) {
    if (!layout.has_effects()) throw std::invalid_argument("rmst_distribution: cluster query on a model without effects");
    if (*query.cluster < 0 || *query.cluster >= layout.clusters())
      throw std::invalid_argument("rmst_distribution: cluster index out of range");
  }

  const Eigen::MatrixXd all = draws.pooled();
  const Eigen::Index n = all.rows();
  RmstDistribution out;
  out.group0.values.resize(n);
  out.group1.values.resize(n);
  Eigen::VectorXd x0 = x, x1 = x;
  x0(query.group_column) = 0.0;
  x1(query.group_column) = 1.0;

  for (Eigen::Index s = 0; s < n; ++s) {
    const auto row = all.row(s);
    const Eigen::VectorXd beta = row.head(q).transpose();
    const double shape = layout.has_shape() ? row(layout.shape_index()) : 1.0;
    EffectValue effect = NoEffect{};
    if (query.cluster) {
      const double e = row(layout.effect_offset() + *query.cluster);
      if (layout.effect() == EffectType::Random)
        effect = RandomOffset{e};
      else
        effect = Frailty{e};
    }
    const auto p0 = make_family_params(layout.family(), x0.dot(beta), shape);
    const auto p1 = make_family_params(layout.family(), x1.dot(beta), shape);
    out.group0.values(s) = rmst(p0, effect, query.tau, query.options);
    out.group1.values(s) = rmst(p1, effect, query.tau, query.options);
  }
  out.difference.values = out.group1.values - out.group0.values;
  return out;
}

}  // namespace brmst
