#include "meissner/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "meissner/constants.hpp"
#include "meissner/error.hpp"

namespace meissner::specfun {
namespace {

constexpr int max_terms = 500;
constexpr double series_eps = 1e-16;

void check_argument(int n, double x) {
  if (n < 0) throw DomainError("bessel: negative order " + std::to_string(n));
  if (!std::isfinite(x) || x < 0.0) throw DomainError("bessel: argument must be finite and >= 0");
}

// sum_k q^k / (k! (n+k)!) * n!, i.e. the series with its leading term
// normalized to 1. The factorials advance one factor per term.
double normalized_series(int n, double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < max_terms; ++k) {
    term *= q / ((k + 1.0) * (n + k + 1.0));
    sum += term;
    if (term < series_eps * sum) break;
  }
  return sum;
}

// (x/2)^n / n!
double leading_factor(int n, double x) {
  double f = 1.0;
  const double half = 0.5 * x;
  for (int j = 1; j <= n; ++j) f *= half / j;
  return f;
}

// exp(-x) I_n(x) ~ (2 pi x)^(-1/2) sum_k (-1)^k prod_{j<=k} (4n^2 - (2j-1)^2) / (k! (8x)^k)
double hankel_scaled(int n, double x) {
  const double mu = 4.0 * n * n;
  double term = 1.0;
  double sum = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k < max_terms; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > previous) break;  // past the smallest term
    sum += term;
    previous = std::abs(term);
    if (previous < series_eps * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * constants::pi * x);
}

bool use_hankel(int n, double x) { return x > series_limit && x > static_cast<double>(n) * n; }

}  // namespace

double bessel_i(int n, double x) {
  check_argument(n, x);
  if (x <= series_limit) {
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    return leading_factor(n, x) * normalized_series(n, x);
  }
  return std::exp(x) * bessel_i_scaled(n, x);
}

double bessel_i_scaled(int n, double x) {
  check_argument(n, x);
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (use_hankel(n, x)) return hankel_scaled(n, x);
  if (x <= series_limit) return std::exp(-x) * leading_factor(n, x) * normalized_series(n, x);
  // Large order with x > 50: combine the prefactor in log space.
  const double log_prefactor = n * std::log(0.5 * x) - std::lgamma(n + 1.0) - x;
  return std::exp(log_prefactor) * normalized_series(n, x);
}

double bessel_i1_over_x_scaled(double x) {
  check_argument(1, x);
  if (x <= series_limit) return std::exp(-x) * 0.5 * normalized_series(1, x);
  return hankel_scaled(1, x) / x;
}

double bessel_i_ratio(double x) {
  check_argument(1, x);
  if (x == 0.0) return 0.0;
  if (x <= series_limit) return 0.5 * x * normalized_series(1, x) / normalized_series(0, x);
  return hankel_scaled(1, x) / hankel_scaled(0, x);
}

}  // namespace meissner::specfun
