#pragma once

#include <cmath>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace rankfd {

/// Upper tail P(chi2_df > x). df may be fractional (Box-type approximations
/// hand us estimated degrees of freedom), so this goes through the
/// regularized upper incomplete gamma function rather than a table.
inline double chisq_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

inline double chisq_cdf(double x, double df) {
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(0.5 * df, 0.5 * x);
}

inline double chisq_quantile(double p, double df) {
    return 2.0 * boost::math::gamma_p_inv(0.5 * df, p);
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

/// Inverse standard normal CDF, p in (0, 1).
inline double normal_quantile(double p) {
    return -1.41421356237309504880 * boost::math::erfc_inv(2.0 * p);
}

/// Inverse CDF of the standard Laplace (double exponential) distribution.
inline double laplace_quantile(double p) {
    return p < 0.5 ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p));
}

/// Inverse CDF of exp(N(0,1)).
inline double lognormal_quantile(double p) {
    return std::exp(normal_quantile(p));
}

}  // namespace rankfd
