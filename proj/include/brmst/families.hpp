#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <variant>

namespace brmst {

enum class Family { Exponential, Weibull, LogLogistic, LogNormal };

std::string_view to_string(Family family);
/// Accepts "exponential", "weibull", "loglogistic", "lognormal".
Family parse_family(std::string_view name);

/// S(t) = exp(-lambda t).
struct Exponential {
  double lambda;
};

/// S(t) = exp(-lambda t^k).
struct Weibull {
  double lambda;
  double k;
};

/// S(t) = 1 / (1 + e^mu t^k).
struct LogLogistic {
  double mu;
  double k;
};

/// log T ~ N(mu, sigma2).
struct LogNormal {
  double mu;
  double sigma2;
};

using FamilyParams = std::variant<Exponential, Weibull, LogLogistic, LogNormal>;

Family family_of(const FamilyParams& params);

/// Throws std::domain_error when a rate, shape or variance is not positive
/// or a location is not finite.
void validate(const FamilyParams& params);

/// Weibull with a time scale: S(t) = exp(-(t / scale)^k).
struct WeibullAlt {
  double scale;
  double k;
};

/// Log-logistic with a time scale: S(t) = 1 / (1 + (t / alpha)^k).
struct LogLogisticAlt {
  double alpha;
  double k;
};

Weibull to_standard(const WeibullAlt& alt);
WeibullAlt to_alternate(const Weibull& params);
LogLogistic to_standard(const LogLogisticAlt& alt);
LogLogisticAlt to_alternate(const LogLogistic& params);

struct NoEffect {};

/// Cluster offset on the linear scale: lambda e^u for exponential/Weibull,
/// mu + u for log-logistic/log-normal.
struct RandomOffset {
  double u;
};

/// Multiplicative frailty on the hazard: S(t | v) = S(t)^v.
struct Frailty {
  double v;
};

using EffectValue = std::variant<NoEffect, RandomOffset, Frailty>;

/// Parameters with a random offset folded into the linear-scale parameter.
FamilyParams apply_offset(const FamilyParams& params, double u);

double log_density(const FamilyParams& params, const EffectValue& effect, double t);
double log_survival(const FamilyParams& params, const EffectValue& effect, double t);
double hazard(const FamilyParams& params, const EffectValue& effect, double t);

inline double survival(const FamilyParams& params, const EffectValue& effect, double t) {
  return std::exp(log_survival(params, effect, t));
}

inline double log_density(const FamilyParams& params, double t) { return log_density(params, NoEffect{}, t); }
inline double log_survival(const FamilyParams& params, double t) { return log_survival(params, NoEffect{}, t); }

}  // namespace brmst
