#pragma once

namespace wfoot::num {

// Standard normal distribution function Phi(z).
double norm_cdf(double z);

// Inverse of norm_cdf on (0,1). Wichura's PPND16 rational approximation
// (algorithm AS 241), accurate to about 1e-15 in double precision.
// Returns -inf at p == 0 and +inf at p == 1; throws std::domain_error
// outside [0,1].
double norm_quantile(double p);

// Upper quantile z_alpha with P(Z > z_alpha) = alpha.
double norm_upper_quantile(double alpha);

// P(X <= h, Y <= k) for a standard bivariate normal vector with
// correlation r, |r| <= 1. Drezner-Wesolowsky / Genz single-integral
// scheme; absolute error below 5e-16 away from |r| = 1.
double bvn_cdf(double h, double k, double r);

}  // namespace wfoot::num
