#pragma once

#include <cstddef>

// Null distributions used by the hypothesis tests. Upper-tail p-values are
// clamped to [0, 1].
namespace sproc::dist {

double normal_cdf(double x);
double normal_upper(double x);  // 1 - Phi(x) without cancellation
double normal_quantile(double p);

// Limiting law of sqrt(n) D: 1 - 2 sum (-1)^(k-1) exp(-2 k^2 x^2).
double kolmogorov_cdf(double x);
// Stephens' finite-n correction (sqrt n + 0.12 + 0.11 / sqrt n) D.
double ks_pvalue(double d, std::size_t n);
double ks_one_sided_pvalue(double d_plus, std::size_t n);

// Limiting law of the Cramer-von Mises statistic (Bessel K_1/4 series).
double cvm_asymptotic_cdf(double w2);
// Stephens' modified statistic (W2 - 0.4/n + 0.6/n^2)(1 + 1/n) against the
// limiting law.
double cvm_pvalue(double w2, std::size_t n);

// Marsaglia & Marsaglia (2004): limiting Anderson-Darling law and its
// finite-n correction.
double ad_asymptotic_cdf(double a2);
double ad_cdf(double a2, std::size_t n);
double ad_pvalue(double a2, std::size_t n);

}  // namespace sproc::dist
