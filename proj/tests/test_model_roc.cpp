#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "sproc/error.hpp"
#include "sproc/model_roc.hpp"

using namespace sproc;

namespace {

void check_same_knots(const RocCurve& a, const RocCurve& b, double tol = 0.0) {
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(std::abs(a.knots()[k].p - b.knots()[k].p) <= tol);
        CHECK(std::abs(a.knots()[k].r - b.knots()[k].r) <= tol);
    }
}

RocCurve sampled(double (*f)(double), int n = 50) {
    std::vector<RocKnot> k;
    for (int i = 0; i <= n; ++i) {
        const double p = static_cast<double>(i) / n;
        k.push_back({p, f(p), 0.0});
    }
    return RocCurve(k, Direction::high, FpConvention::area, Provenance::theoretical);
}

// Lorenz curve evaluated by an independent ascending sort over cell values
// (equal cell areas), interpolated linearly.
double lorenz_oracle(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double total = std::accumulate(v.begin(), v.end(), 0.0);
    const double n = static_cast<double>(v.size());
    const double pos = q * n;
    const auto whole = static_cast<std::size_t>(std::floor(pos));
    double s = 0.0;
    for (std::size_t i = 0; i < whole && i < v.size(); ++i) s += v[i];
    if (whole < v.size()) s += (pos - static_cast<double>(whole)) * v[whole];
    return s / total;
}

}  // namespace

TEST_CASE("collapse: single-covariate models give the covariate curve") {
    std::mt19937_64 rng(1);
    const Window w(0, 1, 0, 1);
    const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 30, 30);
    const Raster z = oracle::random_raster(rng, g, 0, 2);
    const auto pts = oracle::thinned_poisson(rng, [](double x, double) { return 150 * (0.5 + x); }, 225, 0, 1, 0, 1);
    const PointPattern pp(pts, w);
    SUBCASE("grid logistic") {
        const PresenceGrid pg = discretise(pp, g);
        const LogisticModel m = fit_logistic(pg, std::vector<Raster>{z});
        const double sign = m.coefficients[1] > 0 ? 1 : -1;
        const RocCurve mc = roc_model_grid(m, pg, false);
        check_same_knots(mc, roc_covariate_grid(pg, z, sign > 0 ? Direction::high : Direction::low));
        // monotone remap of fitted values
        std::vector<double> sq(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) sq[j] = (*m.fitted)[j] * (*m.fitted)[j];
        check_same_knots(roc_model_grid(ProbabilityGrid(g, sq), pg), mc);
        check_same_knots(roc_model_grid(*m.fitted, pg), mc);
    }
    SUBCASE("Poisson loglinear") {
        const Raster zx = Raster::from_function(g, [](double x, double) { return x; });
        const PoissonPPModel m = fit_poisson_loglinear(pp, std::vector<Raster>{zx});
        REQUIRE(m.coefficients[1] > 0);
        check_same_knots(roc_model_pp(m, pp, false), roc_covariate_pp(pp, zx));
        // exp and log of the intensity rank the same way
        std::vector<double> lg(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) lg[j] = std::log(m.fitted[j]);
        check_same_knots(roc_model_pp(Raster(g, lg), pp), roc_model_pp(m.fitted, pp));
    }
    SUBCASE("homogeneous model is the diagonal") {
        const PoissonPPModel m = fit_poisson_loglinear(pp, std::vector<Raster>{}, {}, {}, &g);
        const RocCurve c = roc_model_pp(m, pp, false);
        CHECK(auc(c) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(c.size() == 2u);
    }
}

TEST_CASE("leave-one-out M-ROC") {
    std::mt19937_64 rng(2);
    const Window w(0, 1, 0, 1);
    const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 20, 20);
    const Raster zx = Raster::from_function(g, [](double x, double) { return x; });
    const Raster zy = Raster::from_function(g, [](double, double y) { return y * y; });
    const PointPattern pp(oracle::thinned_poisson(rng, [](double x, double y) { return 100 * std::exp(x + y); },
                                                  100 * std::exp(2.0), 0, 1, 0, 1),
                          w);
    const std::vector<Raster> covs{zx, zy};
    const PoissonPPModel m = fit_poisson_loglinear(pp, covs);
    const RocCurve raw = roc_model_pp(m, pp, false);
    const RocCurve loo = roc_model_pp(m, pp, true, 1);
    CHECK(std::abs(auc(raw) - auc(loo)) < 0.02);
    CHECK(auc(loo) != auc(raw));

    const PresenceGrid pg = discretise(pp, g);
    const LogisticModel lm = fit_logistic(pg, covs);
    const RocCurve graw = roc_model_grid(lm, pg, false);
    const RocCurve gloo = roc_model_grid(lm, pg, true, FpConvention::all_pixels, 1);
    CHECK(std::abs(auc(graw) - auc(gloo)) < 0.02);
}

TEST_CASE("theoretical curves") {
    SUBCASE("corner example AUC 3/4") {
        const Window w(0, 1, 0, 1);
        const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 200, 200);
        const Raster s = Raster::from_function(g, [](double x, double) { return x; });
        const Raster lam = Raster::from_function(g, [](double x, double y) { return 100 * x * x * y; });
        const double a = auc(roc_theoretical(s, lam, w));
        // quadrature oracle over columns: P(X_I > U) + half the ties
        double num = 0.0, den = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double xi = (i + 0.5) / 200;
            num += xi * xi * ((i + 0.5) / 200.0);
            den += xi * xi;
        }
        CHECK(a == doctest::Approx(num / den).epsilon(1e-12));
        CHECK(a == doctest::Approx(0.75).epsilon(1e-4));
    }
    SUBCASE("lambda as its own score is concave") {
        std::mt19937_64 rng(3);
        const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 25, 25);
        for (int r = 0; r < 10; ++r) {
            const Raster lam = oracle::random_raster(rng, g, 0, 5);
            const ConcavityReport rep = check_concavity(roc_theoretical(lam, lam, Window(0, 1, 0, 1)));
            CHECK(rep.concave);
            CHECK(rep.classification == "concave");
        }
    }
    SUBCASE("scale invariance") {
        std::mt19937_64 rng(4);
        const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 15, 15);
        const Raster s = oracle::random_int_raster(rng, g, 9);
        const Raster lam = oracle::random_raster(rng, g, 0, 3);
        std::vector<double> big(lam.values().begin(), lam.values().end());
        for (auto& v : big) v *= 37.5;
        check_same_knots(roc_theoretical(s, lam, Window(0, 1, 0, 1)), roc_theoretical(s, Raster(g, big), Window(0, 1, 0, 1)),
                         1e-13);
    }
    SUBCASE("presence probabilities and zero intensity") {
        const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 2, 2);
        const RocCurve c = roc_theoretical(ProbabilityGrid(g, {0.1, 0.4, 0.4, 0.9}));
        CHECK(c.fp_convention() == FpConvention::absence);
        // P(pi_I > pi_J) with I ~ pi, J ~ 1 - pi, ties half
        const std::vector<double> v{0.1, 0.4, 0.4, 0.9};
        double num = 0, den = 0;
        for (double a : v) {
            for (double b : v) {
                const double wgt = a * (1 - b);
                num += wgt * (a > b ? 1.0 : (a == b ? 0.5 : 0.0));
                den += wgt;
            }
        }
        CHECK(auc(c) == doctest::Approx(num / den).epsilon(1e-13));
        CHECK_THROWS_AS(roc_theoretical(Raster::constant(g, 1), Raster::constant(g, 0), Window(0, 1, 0, 1)), InputError);
    }
    SUBCASE("model-predicted curves are concave") {
        std::mt19937_64 rng(5);
        const Window w(0, 1, 0, 1);
        const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 20, 20);
        const Raster z1 = oracle::random_raster(rng, g);
        const Raster z2 = Raster::from_function(g, [](double x, double y) { return std::sin(5 * x * y); });
        const PointPattern pp(oracle::thinned_poisson(rng, [](double x, double) { return 200 * x; }, 200, 0, 1, 0, 1), w);
        const std::vector<Raster> covs{z1, z2};
        CHECK(check_concavity(roc_model_predicted(fit_poisson_loglinear(pp, covs), w)).concave);
        CHECK(check_concavity(roc_model_predicted(fit_logistic(discretise(pp, g), covs))).concave);
    }
}

TEST_CASE("empirical M-ROC approaches the theoretical curve") {
    std::mt19937_64 rng(6);
    const Window w(0, 1, 0, 1);
    const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 40, 40);
    const auto f = [](double x, double y) { return std::exp(2 * x - y); };
    const Raster shape = Raster::from_function(g, f);
    const RocCurve truth = roc_theoretical(shape, shape, w);
    std::vector<double> gaps;
    for (double level : {50.0, 200.0, 800.0}) {
        std::vector<double> v(shape.values().begin(), shape.values().end());
        for (auto& x : v) x *= level;
        const Raster lam(g, v);
        double gap = 0.0;
        const int reps = 20;
        for (int r = 0; r < reps; ++r) {
            const PointPattern pp = simulate_poisson(lam, w, rng());
            const RocCurve e = roc_model_pp(lam, pp);
            for (int i = 1; i < 100; ++i) gap += std::abs(e.eval(i / 100.0) - truth.eval(i / 100.0));
        }
        gaps.push_back(gap / (reps * 99));
    }
    CHECK(gaps[1] < gaps[0]);
    CHECK(gaps[2] < gaps[1]);
}

TEST_CASE("Neyman-Pearson dominance") {
    std::mt19937_64 rng(7);
    const Window w(0, 1, 0, 1);
    const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 20, 20);
    const Raster lam = oracle::random_raster(rng, g, 0, 4);
    SUBCASE("S = lambda") {
        const CurveReport rep = check_dominance(lam, lam, w);
        CHECK(rep.max_violation == 0.0);
        for (double v : rep.values) CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("S a monotone transform of lambda") {
        std::vector<double> t(lam.size());
        for (std::size_t j = 0; j < t.size(); ++j) t[j] = std::log1p(lam[j]) * 3 - 2;
        const CurveReport rep = check_dominance(Raster(g, t), lam, w);
        for (double v : rep.values) CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("independent S is strictly dominated") {
        for (int r = 0; r < 20; ++r) {
            const Raster s = oracle::random_raster(rng, g);
            const Raster l = oracle::random_raster(rng, g, 0, 4);
            const CurveReport rep = check_dominance(s, l, w);
            CHECK(rep.max_violation <= 1e-9);
            const RocCurve rs = roc_theoretical(s, l, w);
            const RocCurve rl = roc_theoretical(l, l, w);
            for (double p : {0.2, 0.5, 0.8}) CHECK(rl.eval(p) > rs.eval(p) + 1e-6);
        }
    }
}

TEST_CASE("Lorenz equivalence") {
    const Window w(0, 1, 0, 1);
    const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 20, 20);
    SUBCASE("constant intensity") {
        const CurveReport rep = lorenz_equivalence(Raster::constant(g, 3.0), w);
        CHECK(rep.max_violation < 1e-12);
        const RocCurve c = roc_theoretical(Raster::constant(g, 3.0), Raster::constant(g, 3.0), w);
        CHECK(c.size() == 2u);
    }
    SUBCASE("two levels, closed form") {
        // left half 1, right half 3: L(q) = q/4 for q <= 1/2, then 1/8 + 3(q - 1/2)/4
        const Raster lam = Raster::from_function(g, [](double x, double) { return x < 0.5 ? 1.0 : 3.0; });
        const auto L = lorenz_curve(lam, w);
        REQUIRE(L.size() == 3u);
        CHECK(L[1].first == doctest::Approx(0.5));
        CHECK(L[1].second == doctest::Approx(0.25));
        const RocCurve c = roc_theoretical(lam, lam, w);
        CHECK(c.eval(0.5) == doctest::Approx(0.75));
        CHECK(c.eval(0.25) == doctest::Approx(0.375));
        CHECK(lorenz_equivalence(lam, w).max_violation < 1e-12);
    }
    SUBCASE("random intensity against an independent sort-cumulate") {
        std::mt19937_64 rng(8);
        for (int r = 0; r < 20; ++r) {
            const Raster lam = oracle::random_raster(rng, g, 0, 10);
            CHECK(lorenz_equivalence(lam, w).max_violation < 1e-12);
            const RocCurve c = roc_theoretical(lam, lam, w);
            std::vector<double> v(lam.values().begin(), lam.values().end());
            for (double p = 0.0; p <= 1.0; p += 0.0625) {
                CHECK(std::abs(c.eval(p) - (1.0 - lorenz_oracle(v, 1.0 - p))) < 1e-12);
            }
        }
    }
}

TEST_CASE("concavity classification") {
    CHECK(check_concavity(sampled([](double p) { return std::sqrt(p); })).classification == "concave");
    CHECK(check_concavity(sampled([](double p) { return p * p; })).classification == "convex");
    const auto s_shape = [](double p) {
        const auto sig = [](double t) { return 1.0 / (1.0 + std::exp(-t)); };
        return (sig(10 * (p - 0.5)) - sig(-5)) / (sig(5) - sig(-5));
    };
    const ConcavityReport rep = check_concavity(sampled(s_shape));
    CHECK(rep.classification == "neither");
    CHECK(rep.max_violation() > 1e-3);
    const ConcavityReport diag = check_concavity(sampled([](double p) { return p; }));
    CHECK(diag.concave);
    CHECK(diag.convex);
    // a vertical jump after a sloped segment is not concave
    const RocCurve step({{0, 0, 0}, {0.5, 0.2, 0}, {0.5, 0.9, 0}, {1, 1, 0}}, Direction::high, FpConvention::area,
                        Provenance::empirical);
    CHECK_FALSE(check_concavity(step).concave);
}
