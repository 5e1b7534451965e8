#include "sproc/distributions.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

namespace sproc::dist {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

const boost::math::normal& std_normal() {
    static const boost::math::normal n(0.0, 1.0);
    return n;
}

double stephens_ks(double d, std::size_t n) {
    const double rn = std::sqrt(static_cast<double>(n));
    return (rn + 0.12 + 0.11 / rn) * d;
}

}  // namespace

double normal_cdf(double x) { return boost::math::cdf(std_normal(), x); }

double normal_upper(double x) { return boost::math::cdf(boost::math::complement(std_normal(), x)); }

double normal_quantile(double p) { return boost::math::quantile(std_normal(), p); }

double kolmogorov_cdf(double x) {
    if (x <= 0.0) return 0.0;
    constexpr double pi = std::numbers::pi;
    double s = 0.0;
    if (x < 1.0) {
        // theta-function form converges fast for small x
        for (int k = 1; k <= 20; ++k) {
            const double m = 2.0 * k - 1.0;
            s += std::exp(-m * m * pi * pi / (8.0 * x * x));
        }
        return clamp01(std::sqrt(2.0 * pi) / x * s);
    }
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 == 1 ? term : -term);
        if (term < 1e-17) break;
    }
    return clamp01(1.0 - 2.0 * s);
}

double ks_pvalue(double d, std::size_t n) { return clamp01(1.0 - kolmogorov_cdf(stephens_ks(d, n))); }

double ks_one_sided_pvalue(double d_plus, std::size_t n) {
    const double x = stephens_ks(d_plus, n);
    return clamp01(std::exp(-2.0 * x * x));
}

double cvm_asymptotic_cdf(double w2) {
    if (w2 <= 0.0) return 0.0;
    constexpr double pi = std::numbers::pi;
    double s = 0.0;
    for (int j = 0; j < 50; ++j) {
        const double m = 4.0 * j + 1.0;
        const double arg = m * m / (16.0 * w2);
        if (arg > 700.0) break;
        // Gamma(j + 1/2) / (Gamma(1/2) j!)
        const double c = std::exp(std::lgamma(j + 0.5) - std::lgamma(0.5) - std::lgamma(j + 1.0));
        const double term = c * std::sqrt(m) * std::exp(-arg) * boost::math::cyl_bessel_k(0.25, arg);
        s += term;
        if (term < 1e-16 * s) break;
    }
    return clamp01(s / (pi * std::sqrt(w2)));
}

double cvm_pvalue(double w2, std::size_t n) {
    const double nn = static_cast<double>(n);
    const double star = (w2 - 0.4 / nn + 0.6 / (nn * nn)) * (1.0 + 1.0 / nn);
    return clamp01(1.0 - cvm_asymptotic_cdf(star));
}

double ad_asymptotic_cdf(double z) {
    if (z <= 0.0) return 0.0;
    if (z < 2.0) {
        return std::exp(-1.2337141 / z) / std::sqrt(z) *
               (2.00012 + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z) * z);
    }
    return std::exp(-std::exp(1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z));
}

double ad_cdf(double a2, std::size_t n) {
    const double x = ad_asymptotic_cdf(a2);
    const double nn = static_cast<double>(n);
    double fix;
    if (x > 0.8) {
        fix = (-130.2137 + (745.2337 - (1705.091 - (1950.646 - (1116.360 - 255.7844 * x) * x) * x) * x) * x) / nn;
    } else {
        const double c = 0.01265 + 0.1757 / nn;
        if (x < c) {
            double t = x / c;
            t = std::sqrt(t) * (1.0 - t) * (49.0 * t - 102.0);
            fix = t * (0.0037 / (nn * nn) + 0.00078 / nn + 0.00006) / nn;
        } else {
            double t = (x - c) / (0.8 - c);
            t = -0.00022633 + (6.54034 - (14.6538 - (14.458 - (8.259 - 1.91864 * t) * t) * t) * t) * t;
            fix = t * (0.04213 / nn + 0.01365 / (nn * nn)) / nn;
        }
    }
    return clamp01(x + fix);
}

double ad_pvalue(double a2, std::size_t n) { return clamp01(1.0 - ad_cdf(a2, n)); }

}  // namespace sproc::dist
