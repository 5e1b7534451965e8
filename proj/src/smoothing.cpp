#include "sproc/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "sproc/distributions.hpp"
#include "sproc/error.hpp"

namespace sproc {

namespace {

constexpr double kDensityFloor = 1e-12;

double kernel_cdf(double u, Kernel k) {
    if (k == Kernel::gaussian) return 0.5 * std::erfc(-u * std::numbers::sqrt2 / 2.0);
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return 0.5 + 0.75 * u - 0.25 * u * u * u;
}

double kernel_pdf(double u, Kernel k) {
    if (k == Kernel::gaussian) return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
    return std::abs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

// Type 7 sample quantile of sorted data.
double quantile_sorted(const std::vector<double>& s, double q) {
    const double pos = q * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

void check_group(std::span<const double> v, const char* what) {
    if (v.empty()) {
        throw InputError(std::string("smoothed ROC needs at least one ") + what);
    }
    for (double x : v) {
        if (!std::isfinite(x)) throw InputError(std::string("non-finite ") + what + " value");
    }
}

double resolve_one(const std::optional<double>& h, std::span<const double> z) {
    if (!h) return silverman_bandwidth(z);
    if (!(*h > 0.0) || !std::isfinite(*h)) {
        throw InputError("bandwidths must be positive");
    }
    return *h;
}

// inf{t : G~(t) >= q} for q in (0, 1), to 1e-10 relative to the data scale.
double smoothed_inverse(std::span<const double> z, double h, double q, Kernel k) {
    const auto [mn, mx] = std::minmax_element(z.begin(), z.end());
    double lo = *mn - 40.0 * h;
    double hi = *mx + 40.0 * h;
    const double tol = 1e-10 * std::max(1.0, hi - lo);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (smoothed_cdf(z, h, mid, k) >= q) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

struct SmoothPoint {
    double r;
    double t;
};

SmoothPoint smooth_at(std::span<const double> cases, std::span<const double> controls, const Bandwidths& bw,
                      Kernel k, double p) {
    if (p <= 0.0) return {0.0, std::numeric_limits<double>::infinity()};
    if (p >= 1.0) return {1.0, -std::numeric_limits<double>::infinity()};
    const double t = smoothed_inverse(controls, bw.h2, 1.0 - p, k);
    return {std::clamp(1.0 - smoothed_cdf(cases, bw.h1, t, k), 0.0, 1.0), t};
}

}  // namespace

std::string_view to_string(Kernel k) { return k == Kernel::gaussian ? "gaussian" : "epanechnikov"; }

Kernel kernel_from_string(std::string_view s) {
    if (s == "gaussian") return Kernel::gaussian;
    if (s == "epanechnikov") return Kernel::epanechnikov;
    throw InputError("unknown kernel '" + std::string(s) + "'");
}

double silverman_bandwidth(std::span<const double> samples) {
    if (samples.size() < 2) {
        throw InputError("bandwidth selection needs at least two samples");
    }
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : s) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (!(sd > 0.0)) {
        throw InputError("bandwidth selection needs samples with positive spread");
    }
    const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    return 0.9 * spread * std::pow(n, -0.2);
}

Bandwidths resolve_bandwidths(const KernelSpec& spec, std::span<const double> cases,
                              std::span<const double> controls) {
    Bandwidths b;
    b.h1 = resolve_one(spec.h1, cases);
    b.h2 = resolve_one(spec.h2, controls);
    b.hf = spec.hf ? resolve_one(spec.hf, cases) : b.h1;
    b.hg = spec.hg ? resolve_one(spec.hg, controls) : b.h2;
    return b;
}

double smoothed_cdf(std::span<const double> z, double h, double t, Kernel k) {
    double s = 0.0;
    for (double v : z) s += kernel_cdf((t - v) / h, k);
    return s / static_cast<double>(z.size());
}

double smoothed_density(std::span<const double> z, double h, double t, Kernel k) {
    double s = 0.0;
    for (double v : z) s += kernel_pdf((t - v) / h, k);
    return s / (static_cast<double>(z.size()) * h);
}

RocCurve smooth_roc(std::span<const double> cases, std::span<const double> controls, const KernelSpec& spec,
                    std::size_t points) {
    check_group(cases, "case");
    check_group(controls, "control");
    if (points < 2) throw InputError("smoothed ROC needs at least two grid points");
    const Bandwidths bw = resolve_bandwidths(spec, cases, controls);
    std::vector<RocKnot> knots;
    knots.reserve(points);
    double last = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double p = static_cast<double>(i) / static_cast<double>(points - 1);
        const SmoothPoint s = smooth_at(cases, controls, bw, spec.kernel, p);
        // bisection noise must not break monotonicity
        last = std::max(last, s.r);
        knots.push_back({p, last, s.t});
    }
    knots.front().t = std::numeric_limits<double>::quiet_NaN();
    return RocCurve(std::move(knots), Direction::high, FpConvention::absence, Provenance::smoothed);
}

ConfidenceBand smooth_band(std::span<const double> cases, std::span<const double> controls, const KernelSpec& spec,
                           double level, std::vector<double> p_grid) {
    check_group(cases, "case");
    check_group(controls, "control");
    if (!(level > 0.0 && level < 1.0)) throw InputError("confidence level must lie in (0, 1)");
    const double zq = dist::normal_quantile(0.5 + 0.5 * level);
    const Bandwidths bw = resolve_bandwidths(spec, cases, controls);
    const double n = static_cast<double>(cases.size());
    const double m = static_cast<double>(controls.size());

    ConfidenceBand b;
    b.p = p_grid.empty() ? uniform_p_grid() : std::move(p_grid);
    b.level = level;
    b.method = BandMethod::smooth_plugin;
    for (double p : b.p) {
        const SmoothPoint s = smooth_at(cases, controls, bw, spec.kernel, p);
        double var = s.r * (1.0 - s.r) / n;
        std::uint8_t flag = 0;
        if (p > 0.0 && p < 1.0) {
            const double g = smoothed_density(controls, bw.hg, s.t, spec.kernel);
            if (g < kDensityFloor) {
                flag = 1;
            } else {
                const double ratio = smoothed_density(cases, bw.hf, s.t, spec.kernel) / g;
                var += ratio * ratio * p * (1.0 - p) / m;
            }
        }
        b.center.push_back(s.r);
        b.flagged.push_back(flag);
        if (flag) {
            b.lower.push_back(0.0);
            b.upper.push_back(1.0);
        } else {
            const double half = zq * std::sqrt(var);
            b.lower.push_back(std::clamp(s.r - half, 0.0, 1.0));
            b.upper.push_back(std::clamp(s.r + half, 0.0, 1.0));
        }
    }
    return b;
}

}  // namespace sproc
