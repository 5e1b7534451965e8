#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sproc/distributions.hpp"
#include "sproc/error.hpp"
#include "sproc/smoothing.hpp"

using namespace sproc;

namespace {

std::vector<double> normals(std::mt19937_64& rng, std::size_t n, double mu = 0.0, double sd = 1.0) {
    std::normal_distribution<double> d(mu, sd);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

// Binormal ROC: cases N(mu, 1) against controls N(0, 1).
double binormal(double p, double mu) {
    if (p <= 0) return 0;
    if (p >= 1) return 1;
    return dist::normal_upper(dist::normal_quantile(1 - p) - mu);
}

}  // namespace

TEST_CASE("Silverman bandwidth") {
    std::mt19937_64 rng(31);
    const auto x = normals(rng, 100);
    // formula oracle with an independent quartile computation
    std::vector<double> s = x;
    std::sort(s.begin(), s.end());
    auto q = [&](double f) {
        const double h = 99 * f;
        const int lo = static_cast<int>(h);
        return s[lo] + (h - lo) * (s[lo + 1] - s[lo]);
    };
    double mean = 0, ss = 0;
    for (double v : x) mean += v / 100;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / 99);
    const double expect = 0.9 * std::min(sd, (q(0.75) - q(0.25)) / 1.34) * std::pow(100.0, -0.2);
    CHECK(silverman_bandwidth(x) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(silverman_bandwidth(x) == doctest::Approx(0.9 * std::pow(100.0, -0.2)).epsilon(0.2));

    std::vector<double> scaled = x;
    for (auto& v : scaled) v = 7.5 * v - 3;
    CHECK(silverman_bandwidth(scaled) == doctest::Approx(7.5 * silverman_bandwidth(x)).epsilon(1e-12));

    std::vector<double> two(100000, 0.0);
    two[0] = 1.0;  // IQR 0: falls back to sd
    const double h = silverman_bandwidth(two);
    CHECK(h > 0.0);
    CHECK(h < 0.01);
    CHECK_THROWS_AS(silverman_bandwidth(std::vector<double>(5, 2.0)), InputError);
    CHECK_THROWS_AS(silverman_bandwidth(std::vector<double>{1.0}), InputError);
}

TEST_CASE("smoothed ROC") {
    std::mt19937_64 rng(32);
    SUBCASE("equal distributions approach the diagonal") {
        std::vector<double> gaps;
        for (std::size_t n : {100u, 2000u}) {
            double g = 0.0;
            for (int r = 0; r < 5; ++r) {
                const auto a = normals(rng, n), b = normals(rng, n);
                const RocCurve c = smooth_roc(a, b, {}, 101);
                for (const auto& k : c.knots()) g = std::max(g, std::abs(k.r - k.p));
            }
            gaps.push_back(g);
        }
        CHECK(gaps[1] < gaps[0]);
        CHECK(gaps[1] < 0.08);
    }
    SUBCASE("vanishing bandwidth gives the step curve") {
        const auto a = normals(rng, 40, 0.7), b = normals(rng, 60);
        KernelSpec k;
        k.h1 = k.h2 = 1e-6;
        const RocCurve sm = smooth_roc(a, b, k, 2001);
        CHECK(sm.provenance() == Provenance::smoothed);
        // distance of each smoothed knot from the step curve, vertical
        // segments included
        const RocCurve step = roc_casecontrol(a, b);
        double gap = 0.0;
        for (const auto& kn : sm.knots()) {
            gap = std::max({gap, step.eval(kn.p) - kn.r, kn.r - step.eval_right(kn.p)});
        }
        CHECK(gap < 2.0 / 40);
    }
    SUBCASE("separated groups") {
        const auto a = normals(rng, 50, 100.0), b = normals(rng, 50);
        // 501 grid points: the first trapezoid alone costs 0.001
        CHECK(auc(smooth_roc(a, b)) > 0.998);
    }
    SUBCASE("affine invariance with automatic bandwidths") {
        const auto a = normals(rng, 80, 0.5), b = normals(rng, 70);
        std::vector<double> a2 = a, b2 = b;
        for (auto& v : a2) v = 4 * v + 11;
        for (auto& v : b2) v = 4 * v + 11;
        const RocCurve c1 = smooth_roc(a, b, {}, 201);
        const RocCurve c2 = smooth_roc(a2, b2, {}, 201);
        for (std::size_t i = 0; i < c1.size(); ++i) CHECK(std::abs(c1.knots()[i].r - c2.knots()[i].r) < 1e-8);
    }
    SUBCASE("monotone on [0,1] for both kernels") {
        const auto a = normals(rng, 30, 1), b = normals(rng, 30);
        for (Kernel kern : {Kernel::gaussian, Kernel::epanechnikov}) {
            KernelSpec k;
            k.kernel = kern;
            const RocCurve c = smooth_roc(a, b, k);
            CHECK(c.knots().front().r == 0.0);
            CHECK(c.knots().back().r == 1.0);
            for (std::size_t i = 1; i < c.size(); ++i) CHECK(c.knots()[i].r >= c.knots()[i - 1].r);
        }
    }
    CHECK_THROWS_AS(smooth_roc(std::vector<double>{}, std::vector<double>{1, 2}), InputError);
    CHECK_THROWS_AS(smooth_roc(std::vector<double>{1, 2}, std::vector<double>{3, 3}), InputError);
}

TEST_CASE("smoothed variance band") {
    std::mt19937_64 rng(33);
    SUBCASE("equal samples: plug-in identity") {
        const auto a = normals(rng, 300);
        const ConfidenceBand b = smooth_band(a, a, {}, 0.95);
        const double zq = dist::normal_quantile(0.975);
        for (std::size_t i = 0; i < b.p.size(); ++i) {
            const double p = b.p[i];
            CHECK(std::abs(b.center[i] - p) < 1e-8);
            const double half = zq * std::sqrt((2.0 / 300) * p * (1 - p));
            if (b.lower[i] > 0 && b.upper[i] < 1) {
                CHECK(std::abs((b.upper[i] - b.lower[i]) / 2 - half) < 1e-7);
            }
        }
        CHECK(b.upper.front() == 0.0);
        CHECK(b.lower.back() == 1.0);
    }
    SUBCASE("vanishing control density widens the band") {
        std::vector<double> ctrl;
        for (int i = 0; i < 20; ++i) ctrl.push_back(i < 10 ? 0.001 * i : 100 + 0.001 * i);
        KernelSpec k;
        k.h1 = k.h2 = 0.5;
        const ConfidenceBand b = smooth_band(std::vector<double>{50, 51, 52}, ctrl, k, 0.95, {0.25, 0.5, 0.75});
        CHECK(b.flagged[1] == 1);
        CHECK(b.lower[1] == 0.0);
        CHECK(b.upper[1] == 1.0);
        CHECK(b.flagged[0] == 0);
    }
    SUBCASE("coverage on binormal data, small run") {
        std::vector<double> grid;
        for (int i = 1; i < 20; ++i) grid.push_back(i * 0.05);
        std::size_t hit = 0, total = 0;
        for (int r = 0; r < 60; ++r) {
            const auto a = normals(rng, 500, 1.0), b = normals(rng, 500);
            const ConfidenceBand band = smooth_band(a, b, {}, 0.95, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double t = binormal(grid[i], 1.0);
                hit += t >= band.lower[i] && t <= band.upper[i];
                ++total;
            }
        }
        const double cov = double(hit) / double(total);
        CHECK(cov > 0.88);
        CHECK(cov < 0.99);
    }
}
