#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sproc/error.hpp"
#include "sproc/model_roc.hpp"
#include "sproc/rho.hpp"

using namespace sproc;

namespace {

const Window kUnit(0, 1, 0, 1);

// Brute-force isotonic regression: the solution is constant on consecutive
// blocks at the block means, so search every partition into blocks.
std::vector<double> isotonic_brute(const std::vector<double>& y, const std::vector<double>& w) {
    const std::size_t n = y.size();
    double best = 1e300;
    std::vector<double> out;
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        std::vector<double> fit(n);
        std::size_t start = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == n - 1 || (mask >> i) & 1u) {
                double s = 0, sw = 0;
                for (std::size_t j = start; j <= i; ++j) s += w[j] * y[j], sw += w[j];
                for (std::size_t j = start; j <= i; ++j) fit[j] = s / sw;
                start = i + 1;
            }
        }
        bool ok = true;
        for (std::size_t i = 1; i < n; ++i) ok = ok && fit[i] >= fit[i - 1] - 1e-12;
        if (!ok) continue;
        double sse = 0;
        for (std::size_t i = 0; i < n; ++i) sse += w[i] * (y[i] - fit[i]) * (y[i] - fit[i]);
        if (sse < best) best = sse, out = fit;
    }
    return out;
}

Raster ramp(const GridSpec& g) {
    return Raster::from_function(g, [](double x, double y) { return x + 0.0137 * y; });
}

double sup_gap(const RocCurve& a, const RocCurve& b) {
    std::vector<double> ps;
    for (const auto& k : a.knots()) ps.push_back(k.p);
    for (const auto& k : b.knots()) ps.push_back(k.p);
    double g = 0;
    for (double p : ps) g = std::max(g, std::abs(a.eval(p) - b.eval(p)));
    return g;
}

}  // namespace

TEST_CASE("pool adjacent violators") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0, 1);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> y(10), w(10);
        for (auto& v : y) v = u(rng);
        for (auto& v : w) v = 0.1 + u(rng);
        const auto fit = pava(y, w);
        const auto brute = isotonic_brute(y, w);
        for (std::size_t i = 0; i < 10; ++i) CHECK(fit[i] == doctest::Approx(brute[i]).epsilon(1e-12));
    }
    const std::vector<double> mono{1, 2, 2, 5}, ones(4, 1.0);
    CHECK(pava(mono, ones) == mono);
    const auto flat = pava({4, 3, 2, 1}, {1, 1, 1, 1});
    for (double v : flat) CHECK(v == 2.5);
}

TEST_CASE("isotonic rho") {
    const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 10, 1);
    const Raster z = Raster::from_function(g, [](double x, double) { return std::floor(x * 10); });
    SUBCASE("already monotone counts") {
        std::vector<Point> pts;
        for (int c = 0; c < 10; ++c) {
            for (int k = 0; k < c; ++k) pts.push_back({(c + 0.5) / 10, 0.5});
        }
        const RhoEstimate r = estimate_rho_isotonic(PointPattern(pts, kUnit), z, kUnit);
        for (int c = 0; c < 10; ++c) CHECK(r.rho[c] == doctest::Approx(c / 0.1));
        CHECK(r.lambda_total == doctest::Approx(45.0));
        // decreasing fit of increasing data pools everything
        const RhoEstimate d = estimate_rho_isotonic(PointPattern(pts, kUnit), z, kUnit, Direction::low);
        for (double v : d.rho) CHECK(v == doctest::Approx(45.0));
        CHECK(check_concavity(roc_from_rho(r, spatial_cdf(z, kUnit), r.kappa)).concave);
    }
    SUBCASE("curves from isotonic fits are concave or convex") {
        std::mt19937_64 rng(42);
        const GridSpec g2 = GridSpec::tiling(0, 1, 0, 1, 40, 40);
        const Raster z2 = oracle::random_int_raster(rng, g2, 30);
        const PointPattern pp(oracle::uniform_points(rng, 300, 0, 1, 0, 1), kUnit);
        const StepCdf f0 = spatial_cdf(z2, kUnit);
        const RhoEstimate up = estimate_rho_isotonic(pp, z2, kUnit, Direction::high);
        const RhoEstimate down = estimate_rho_isotonic(pp, z2, kUnit, Direction::low);
        std::vector<std::string> warn;
        CHECK(check_concavity(roc_from_rho(up, f0, up.kappa, Direction::high, &warn)).concave);
        CHECK(check_concavity(roc_from_rho(down, f0, down.kappa, Direction::high, &warn)).convex);
        CHECK(warn.empty());
    }
}

TEST_CASE("kernel rho") {
    const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 100, 100);
    const Raster z = ramp(g);
    SUBCASE("flat truth") {
        std::mt19937_64 rng(43);
        for (int rep = 0; rep < 3; ++rep) {
            const PointPattern pp(oracle::uniform_points(rng, 2000, 0, 1, 0, 1), kUnit);
            const RhoEstimate r = estimate_rho_kernel(pp, z, kUnit);
            double worst = 0;
            for (double v : r.rho) worst = std::max(worst, std::abs(v / r.kappa - 1));
            CHECK(worst < 0.15);
            CHECK(r.lambda_total == doctest::Approx(2000.0).epsilon(0.02));
        }
    }
    SUBCASE("step truth") {
        const Raster lam = Raster::from_function(g, [](double x, double) { return x < 0.5 ? 2000.0 : 6000.0; });
        const PointPattern pp = simulate_poisson(lam, kUnit, 44);
        const RhoEstimate r = estimate_rho_kernel(pp, z, kUnit);
        // level = mean of the estimate over each flat stretch; pointwise
        // values carry kernel noise of several percent
        double sum[2] = {0, 0};
        int cnt[2] = {0, 0};
        for (std::size_t i = 0; i < r.z.size(); ++i) {
            if (std::abs(r.z[i] - 0.507) < 3 * r.bandwidth) continue;
            const int side = r.z[i] < 0.507 ? 0 : 1;
            const double truth = side ? 6000.0 : 2000.0;
            CHECK(std::abs(r.rho[i] / truth - 1) < 0.2);
            sum[side] += r.rho[i];
            ++cnt[side];
        }
        CHECK(sum[0] / cnt[0] == doctest::Approx(2000.0).epsilon(0.10));
        CHECK(sum[1] / cnt[1] == doctest::Approx(6000.0).epsilon(0.10));
        CHECK(r.lambda_total == doctest::Approx(double(pp.size())).epsilon(0.02));
        // kernel route against the direct empirical curve
        const RocCurve via_rho = roc_from_rho(r, spatial_cdf(z, kUnit), r.kappa);
        CHECK(sup_gap(via_rho, roc_covariate_pp(pp, z)) < 0.05);
    }
    SUBCASE("affine rescaling of Z and bandwidth") {
        std::mt19937_64 rng(45);
        const GridSpec gs = GridSpec::tiling(0, 1, 0, 1, 30, 30);
        const Raster zs = oracle::random_raster(rng, gs);
        std::vector<double> t(zs.values().begin(), zs.values().end());
        for (auto& v : t) v = 3 * v + 1;
        const PointPattern pp(oracle::uniform_points(rng, 200, 0, 1, 0, 1), kUnit);
        const RhoEstimate a = estimate_rho_kernel(pp, zs, kUnit, 0.05, 64);
        const RhoEstimate b = estimate_rho_kernel(pp, Raster(gs, t), kUnit, 0.15, 64);
        for (std::size_t i = 0; i < 64; ++i) {
            CHECK(b.z[i] == doctest::Approx(3 * a.z[i] + 1).epsilon(1e-12));
            CHECK(b.rho[i] == doctest::Approx(a.rho[i]).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(estimate_rho_kernel(PointPattern({{0.5, 0.5}}, kUnit), Raster::constant(g, 1.0), kUnit),
                    InputError);
}

TEST_CASE("rho and ROC bridge") {
    const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 100, 100);
    const Raster z = ramp(g);
    const StepCdf f0 = spatial_cdf(z, kUnit);
    RhoEstimate flat;
    flat.z = {0.0, 2.0};
    flat.rho = {3.0, 3.0};
    SUBCASE("constant rho is the diagonal") {
        const RocCurve c = roc_from_rho(flat, f0, 3.0);
        for (const auto& k : c.knots()) CHECK(std::abs(k.r - k.p) < 1e-12);
        const RhoEstimate back = rho_from_roc(c, f0, 3.0);
        for (double v : back.rho) CHECK(v == doctest::Approx(3.0).epsilon(1e-9));
        std::vector<std::string> warn;
        roc_from_rho(flat, f0, 6.0, Direction::high, &warn);
        CHECK(warn.size() == 1u);
    }
    SUBCASE("loglinear rho: concave curve and exact mass") {
        const PointPattern pp = simulate_poisson(
            Raster::from_function(g, [](double x, double y) { return 300 * std::exp(2 * (x + 0.0137 * y)); }), kUnit, 46);
        const RhoEstimate r = estimate_rho_loglinear(pp, z, kUnit);
        std::vector<std::string> warn;
        const RocCurve c = roc_from_rho(r, f0, r.kappa, Direction::high, &warn);
        CHECK(warn.empty());
        CHECK(check_concavity(c).concave);
        CHECK(r.lambda_total == doctest::Approx(double(pp.size())).epsilon(1e-3));
        // concave curve gives a density that falls with p, i.e. rises with z
        const RhoEstimate back = rho_from_roc(c, f0, r.kappa);
        for (std::size_t i = 1; i < back.rho.size(); ++i) CHECK(back.rho[i] >= back.rho[i - 1] * (1 - 1e-9));
    }
    SUBCASE("round trip on smooth curves") {
        for (double beta : {-3.0, 0.5, 4.0}) {
            RhoEstimate r;
            for (int i = 0; i <= 200; ++i) {
                r.z.push_back(i / 200.0 * 1.0137);
                r.rho.push_back(std::exp(beta * r.z.back()));
            }
            const double kappa = (std::exp(beta * 1.0137) - 1) / (beta * 1.0137);
            const RocCurve c1 = roc_from_rho(r, f0, kappa);
            const RocCurve c2 = roc_from_rho(rho_from_roc(c1, f0, kappa), f0, kappa);
            CHECK(sup_gap(c1, c2) < 1e-3);
            const RocCurve s = roc_theoretical(z, Raster::from_function(g, [&](double x, double y) {
                                                   return std::exp(beta * (x + 0.0137 * y));
                                               }), kUnit);
            CHECK(sup_gap(c1, s) < 1e-3);
        }
    }
    SUBCASE("step curves are refused") {
        std::mt19937_64 rng(47);
        const PointPattern pp(oracle::uniform_points(rng, 50, 0, 1, 0, 1), kUnit);
        CHECK_THROWS_AS(rho_from_roc(roc_covariate_pp(pp, z), f0, 50.0), InputError);
    }
}
