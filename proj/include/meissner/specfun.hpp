#pragma once

// Modified Bessel functions of the first kind for integer order.
//
// Small and moderate arguments (x <= 50) use the power series
//   I_n(x) = (x/2)^n sum_k (x/2)^{2k} / (k! (n+k)!)
// summed until the term drops below 1e-16 of the partial sum (500 term cap).
// Larger arguments use the exponentially scaled Hankel expansion, so that
// quotients such as I_1(x)/I_0(x) or I_1(r/lambda)/I_0(R/lambda) stay finite
// long after I_n itself overflows.
//
// All functions are pure and reentrant. Negative or non-finite arguments
// throw meissner::DomainError.

namespace meissner::specfun {

/// Argument above which the asymptotic (scaled) form replaces the series.
inline constexpr double series_limit = 50.0;

/// I_n(x). Overflows to +inf for x beyond ~713; use the scaled variants there.
double bessel_i(int n, double x);

/// exp(-x) I_n(x).
double bessel_i_scaled(int n, double x);

/// exp(-x) I_1(x) / x, regular at x = 0 where it equals 1/2.
double bessel_i1_over_x_scaled(double x);

/// I_1(x) / I_0(x); 0 at x = 0, increasing towards 1.
double bessel_i_ratio(double x);

}  // namespace meissner::specfun
