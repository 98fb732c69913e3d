#include "brmst/families.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "brmst/specfun.hpp"

namespace brmst {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

void require_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("survival time must be positive and finite");
}

double base_log_density(const FamilyParams& params, double t) {
  const double log_t = std::log(t);
  return std::visit(
      overloaded{
          [&](const Exponential& p) { return std::log(p.lambda) - p.lambda * t; },
          [&](const Weibull& p) {
            return std::log(p.lambda) + std::log(p.k) + (p.k - 1.0) * log_t - p.lambda * std::pow(t, p.k);
          },
          [&](const LogLogistic& p) {
            return p.mu + std::log(p.k) + (p.k - 1.0) * log_t - 2.0 * softplus(p.mu + p.k * log_t);
          },
          [&](const LogNormal& p) {
            const double z = (log_t - p.mu) / std::sqrt(p.sigma2);
            return -log_t - 0.5 * std::log(2.0 * std::numbers::pi * p.sigma2) - 0.5 * z * z;
          }},
      params);
}

double base_log_survival(const FamilyParams& params, double t) {
  return std::visit(overloaded{[&](const Exponential& p) { return -p.lambda * t; },
                               [&](const Weibull& p) { return -p.lambda * std::pow(t, p.k); },
                               [&](const LogLogistic& p) { return -softplus(p.mu + p.k * std::log(t)); },
                               [&](const LogNormal& p) {
                                 return specfun::log_std_normal_sf((std::log(t) - p.mu) / std::sqrt(p.sigma2));
                               }},
                    params);
}

void validate_effect(const EffectValue& effect) {
  if (const auto* f = std::get_if<Frailty>(&effect); f && !(f->v > 0.0 && std::isfinite(f->v)))
    throw std::domain_error("frailty must be positive");
  if (const auto* r = std::get_if<RandomOffset>(&effect); r && !std::isfinite(r->u))
    throw std::domain_error("random offset must be finite");
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Exponential: return "exponential";
    case Family::Weibull: return "weibull";
    case Family::LogLogistic: return "loglogistic";
    case Family::LogNormal: return "lognormal";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "exponential") return Family::Exponential;
  if (name == "weibull") return Family::Weibull;
  if (name == "loglogistic") return Family::LogLogistic;
  if (name == "lognormal") return Family::LogNormal;
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

Family family_of(const FamilyParams& params) { return static_cast<Family>(params.index()); }

void validate(const FamilyParams& params) {
  auto positive = [](double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error(std::string(what) + " must be positive");
  };
  auto finite = [](double x, const char* what) {
    if (!std::isfinite(x)) throw std::domain_error(std::string(what) + " must be finite");
  };
  std::visit(overloaded{[&](const Exponential& p) { positive(p.lambda, "lambda"); },
                        [&](const Weibull& p) {
                          positive(p.lambda, "lambda");
                          positive(p.k, "k");
                        },
                        [&](const LogLogistic& p) {
                          finite(p.mu, "mu");
                          positive(p.k, "k");
                        },
                        [&](const LogNormal& p) {
                          finite(p.mu, "mu");
                          positive(p.sigma2, "sigma2");
                        }},
             params);
}

Weibull to_standard(const WeibullAlt& alt) {
  if (!(alt.scale > 0.0) || !(alt.k > 0.0)) throw std::domain_error("Weibull scale and shape must be positive");
  return {std::pow(alt.scale, -alt.k), alt.k};
}

WeibullAlt to_alternate(const Weibull& params) { return {std::pow(params.lambda, -1.0 / params.k), params.k}; }

LogLogistic to_standard(const LogLogisticAlt& alt) {
  if (!(alt.alpha > 0.0) || !(alt.k > 0.0)) throw std::domain_error("log-logistic scale and shape must be positive");
  return {-alt.k * std::log(alt.alpha), alt.k};
}

LogLogisticAlt to_alternate(const LogLogistic& params) { return {std::exp(-params.mu / params.k), params.k}; }

FamilyParams apply_offset(const FamilyParams& params, double u) {
  if (u == 0.0) return params;
  return std::visit(overloaded{[&](const Exponential& p) -> FamilyParams { return Exponential{p.lambda * std::exp(u)}; },
                               [&](const Weibull& p) -> FamilyParams { return Weibull{p.lambda * std::exp(u), p.k}; },
                               [&](const LogLogistic& p) -> FamilyParams { return LogLogistic{p.mu + u, p.k}; },
                               [&](const LogNormal& p) -> FamilyParams { return LogNormal{p.mu + u, p.sigma2}; }},
                    params);
}

double log_density(const FamilyParams& params, const EffectValue& effect, double t) {
  require_time(t);
  validate_effect(effect);
  return std::visit(overloaded{[&](NoEffect) { return base_log_density(params, t); },
                               [&](RandomOffset r) { return base_log_density(apply_offset(params, r.u), t); },
                               [&](Frailty f) {
                                 if (f.v == 1.0) return base_log_density(params, t);
                                 const double log_s = base_log_survival(params, t);
                                 const double log_h = base_log_density(params, t) - log_s;
                                 return std::log(f.v) + log_h + f.v * log_s;
                               }},
                    effect);
}

double log_survival(const FamilyParams& params, const EffectValue& effect, double t) {
  require_time(t);
  validate_effect(effect);
  return std::visit(overloaded{[&](NoEffect) { return base_log_survival(params, t); },
                               [&](RandomOffset r) { return base_log_survival(apply_offset(params, r.u), t); },
                               [&](Frailty f) { return f.v * base_log_survival(params, t); }},
                    effect);
}

double hazard(const FamilyParams& params, const EffectValue& effect, double t) {
  require_time(t);
  validate_effect(effect);
  if (const auto* f = std::get_if<Frailty>(&effect))
    return f->v * std::exp(base_log_density(params, t) - base_log_survival(params, t));
  return std::exp(log_density(params, effect, t) - log_survival(params, effect, t));
}

}  // namespace brmst
