#pragma once

// Special functions used by the closed-form RMST expressions and the prior
// densities. All incomplete integrals are non-regularized.

namespace brmst::specfun {

/// log Gamma(a) for a > 0 (Lanczos, g = 7).
double ln_gamma(double a);

/// gamma(z; a) = int_0^z t^(a-1) e^(-t) dt, for z >= 0 and a > 0.
double lower_incomplete_gamma(double z, double a);

/// B(z; a, b) = int_0^z t^(a-1) (1-t)^(b-1) dt.
///
/// a must be positive. b may be zero or negative as long as z < 1; the
/// integrand is then unbounded at t = 1 but integrable on [0, z].
double incomplete_beta(double z, double a, double b);

/// Same as incomplete_beta() but takes 1 - z explicitly, so callers that
/// know the complement in closed form keep full precision when z is
/// within rounding of 1.
double incomplete_beta(double z, double one_minus_z, double a, double b);

/// Complete beta function B(a, b) for a, b > 0.
double beta(double a, double b);

double std_normal_cdf(double x);

/// log(1 - Phi(x)), accurate far into the upper tail.
double log_std_normal_sf(double x);

/// log phi(x).
double log_std_normal_pdf(double x);

}  // namespace brmst::specfun
