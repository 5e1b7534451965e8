#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sproc/error.hpp"
#include "sproc/roc.hpp"

using namespace sproc;

namespace {

// tol = 0 demands bit equality
void check_same_knots(const RocCurve& a, const RocCurve& b, double tol = 0.0) {
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(std::abs(a.knots()[k].p - b.knots()[k].p) <= tol);
        CHECK(std::abs(a.knots()[k].r - b.knots()[k].r) <= tol);
    }
}

RocCurve random_curve(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> s(n);
    std::vector<int> l(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = std::floor(u(rng) * 10);
        l[i] = u(rng) < 0.4 ? 1 : 0;
    }
    l[0] = 1;
    l[1] = 0;
    return roc_binary(s, l, {}, FpConvention::absence);
}

}  // namespace

TEST_CASE("roc_binary basics") {
    SUBCASE("perfect separation") {
        const std::vector<double> s{5, 4, 1, 0};
        const std::vector<int> l{1, 1, 0, 0};
        const RocCurve c = roc_binary(s, l, {}, FpConvention::absence);
        CHECK(auc(c) == 1.0);
        CHECK(c.eval(0.0) == 0.0);
        CHECK(c.eval_right(0.0) == 1.0);
    }
    SUBCASE("constant scores give the diagonal") {
        const std::vector<double> s(6, 1.0);
        const std::vector<int> l{1, 0, 1, 0, 0, 1};
        const RocCurve c = roc_binary(s, l, {}, FpConvention::absence);
        CHECK(c.size() == 2u);
        CHECK(auc(c) == 0.5);
        CHECK(youden(c) == 0.0);
        CHECK(gini(c) == 0.0);
    }
    SUBCASE("four-point pair count") {
        const std::vector<double> s{3, 2, 1, 0};
        const std::vector<int> l{1, 0, 1, 0};
        const RocCurve c = roc_binary(s, l, {}, FpConvention::absence);
        CHECK(auc(c) == doctest::Approx(oracle::pair_count_auc({3, 1}, {2, 0})));
        CHECK(auc(c) == doctest::Approx(0.75));
    }
    SUBCASE("errors") {
        const std::vector<double> s{1, 2};
        CHECK_THROWS_AS(roc_binary(s, std::vector<int>{0, 0}), InputError);
        CHECK_THROWS_AS(roc_binary(s, std::vector<int>{1, 1}, {}, FpConvention::absence), InputError);
        CHECK_NOTHROW(roc_binary(s, std::vector<int>{1, 1}, {}, FpConvention::all_pixels));
        CHECK_THROWS_AS(roc_binary(s, std::vector<int>{1}), InputError);
    }
}

TEST_CASE("AUC against pair counting and rank sums") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> lev(0, 8);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> pos(5 + rep % 7), neg(9 + rep % 5), wp(pos.size());
        for (auto& v : pos) v = lev(rng);
        for (auto& v : neg) v = lev(rng);
        for (auto& v : wp) v = u(rng);
        const RocCurve c = roc_casecontrol(pos, neg);
        CHECK(auc(c) == doctest::Approx(oracle::pair_count_auc(pos, neg)).epsilon(1e-13));
        CHECK(auc(c) == doctest::Approx(oracle::rank_sum_auc(pos, neg)).epsilon(1e-13));

        std::vector<ScoredMass> mp, mn;
        for (std::size_t i = 0; i < pos.size(); ++i) mp.push_back({pos[i], wp[i]});
        for (double v : neg) mn.push_back({v, 1.0});
        const RocCurve cw = roc_from_masses(mp, mn, Direction::high, FpConvention::absence, Provenance::empirical);
        CHECK(auc(cw) == doctest::Approx(oracle::pair_count_auc(pos, neg, wp)).epsilon(1e-13));

        const RocCurve lo = roc_casecontrol(pos, neg, Direction::low);
        CHECK(auc(lo) == doctest::Approx(1.0 - auc(c)).epsilon(1e-13));
    }
}

TEST_CASE("summaries and reversal") {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 30; ++rep) {
        const RocCurve c = random_curve(rng, 40);
        const RocSummary s = summarize(c);
        CHECK(s.gini == doctest::Approx(2 * s.auc - 1));
        CHECK(s.youden_two_sided >= s.youden_one_sided);
        const RocCurve r = reverse(c);
        CHECK(auc(r) == doctest::Approx(1.0 - auc(c)).epsilon(1e-13));
        CHECK(r.direction() == Direction::low);
        const auto ks = c.knots();
        for (std::size_t k = 0; k < ks.size(); ++k) {
            CHECK(r.eval_right(1.0 - ks[k].p) == doctest::Approx(1.0 - c.eval(ks[k].p)).epsilon(1e-12));
            if (k + 1 < ks.size() && ks[k + 1].p > ks[k].p) {
                const double mid = 0.5 * (ks[k].p + ks[k + 1].p);
                CHECK(r.eval(1.0 - mid) == doctest::Approx(1.0 - c.eval(mid)).epsilon(1e-12));
            }
        }
        check_same_knots(reverse(r), c, 1e-15);
    }
}

TEST_CASE("reversed thresholds describe the complementary rule") {
    const std::vector<double> s{1, 2, 3, 4, 5};
    const std::vector<int> l{0, 1, 0, 1, 1};
    const RocCurve c = roc_binary(s, l, {}, FpConvention::absence, Direction::high);
    const RocCurve lo = roc_binary(s, l, {}, FpConvention::absence, Direction::low);
    const RocCurve r = reverse(c);
    // a low-direction knot at threshold t should match the direct low curve
    for (const auto& k : r.knots()) {
        if (std::isnan(k.t)) continue;
        double tp = 0, fp = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] <= k.t) (l[i] ? tp : fp) += 1;
        }
        CHECK(k.r == doctest::Approx(tp / 3.0));
        CHECK(k.p == doctest::Approx(fp / 2.0));
    }
    check_same_knots(r, lo, 1e-15);
}

TEST_CASE("grid C-ROC") {
    std::mt19937_64 rng(8);
    const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 30, 30);
    const Window w(0, 1, 0, 1);
    const auto pts = oracle::uniform_points(rng, 120, 0, 1, 0, 1);
    const PresenceGrid pg = discretise(PointPattern(pts, w), g);
    SUBCASE("presence indicator as covariate") {
        std::vector<double> y(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) y[j] = pg[j] == Presence::present ? 1.0 : 0.0;
        CHECK(auc(roc_covariate_grid(pg, Raster(g, y), Direction::high, FpConvention::absence)) == 1.0);
    }
    SUBCASE("permutation mean is one half") {
        const Raster z = oracle::random_raster(rng, g);
        std::vector<double> v(z.values().begin(), z.values().end());
        double sum = 0.0;
        const int reps = 1000;
        for (int r = 0; r < reps; ++r) {
            std::shuffle(v.begin(), v.end(), rng);
            sum += auc(roc_covariate_grid(pg, Raster(g, v)));
        }
        // sd of one AUC is about 0.027 here, so the mean has sd below 0.001
        CHECK(sum / reps == doctest::Approx(0.5).epsilon(0.006));
    }
    SUBCASE("constant baseline equals unweighted") {
        const Raster z = oracle::random_int_raster(rng, g, 5);
        const Raster b = Raster::constant(g, 3.7);
        // equal up to summation rounding
        check_same_knots(roc_covariate_grid(pg, z, Direction::high, FpConvention::all_pixels, &b),
                         roc_covariate_grid(pg, z), 1e-13);
    }
    SUBCASE("convergence to the point-pattern curve as cells shrink") {
        const auto f = [](double x, double y) { return x * x + 0.5 * y; };
        double prev = 1.0;
        std::vector<double> gaps;
        for (int n : {8, 16, 32, 64, 128}) {
            const GridSpec gi = GridSpec::tiling(0, 1, 0, 1, n, n);
            const Raster z = Raster::from_function(gi, f);
            const RocCurve cg = roc_covariate_grid(discretise(PointPattern(pts, w), gi), z);
            const RocCurve cp = roc_covariate_pp(PointPattern(pts, w), z);
            double gap = 0.0;
            for (double p = 0.0; p <= 1.0; p += 0.005) gap = std::max(gap, std::abs(cg.eval(p) - cp.eval(p)));
            gaps.push_back(gap);
            prev = gap;
        }
        CHECK(gaps.back() < gaps.front());
        CHECK(prev < 0.05);
    }
}

TEST_CASE("point-pattern C-ROC") {
    std::mt19937_64 rng(12);
    const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 25, 25);
    const Window w(0, 1, 0, 1);
    const PointPattern pp(oracle::uniform_points(rng, 60, 0, 1, 0, 1), w);
    const Raster z = oracle::random_int_raster(rng, g, 12);

    SUBCASE("AUC equals point-by-cell pair probability") {
        std::vector<double> zi, zc;
        for (const auto& p : pp.points()) zi.push_back(z[oracle::bin_index(g, p)]);
        for (std::size_t j = 0; j < g.size(); ++j) zc.push_back(z[j]);
        CHECK(auc(roc_covariate_pp(pp, z)) == doctest::Approx(oracle::pair_count_auc(zi, zc)).epsilon(1e-13));
    }
    SUBCASE("doubling weights leaves the curve unchanged") {
        std::uniform_real_distribution<double> u(0.2, 2);
        std::vector<double> wts(pp.size());
        for (auto& v : wts) v = u(rng);
        std::vector<double> w2 = wts;
        for (auto& v : w2) v *= 2;
        const RocCurve a = roc_covariate_pp(pp.with_weights(wts), z);
        const RocCurve b = roc_covariate_pp(pp.with_weights(w2), z);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.knots()[k].r == doctest::Approx(b.knots()[k].r).epsilon(1e-14));
    }
    SUBCASE("monotone transforms") {
        const RocCurve base = roc_covariate_pp(pp, z);
        for (int h = 0; h < 3; ++h) {
            std::vector<double> hz(z.size());
            for (std::size_t j = 0; j < z.size(); ++j) {
                hz[j] = h == 0 ? 3.0 * z[j] - 1.0 : (h == 1 ? z[j] * z[j] * z[j] : std::exp(z[j]));
            }
            check_same_knots(roc_covariate_pp(pp, Raster(g, hz)), base);
        }
    }
    SUBCASE("coordinate reflection and translation") {
        const RocCurve base = roc_covariate_pp(pp, z);
        // reflect x -> 1 - x and shift by (5, -3)
        std::vector<double> rz(z.size());
        for (int r = 0; r < g.nrow; ++r) {
            for (int c = 0; c < g.ncol; ++c) {
                rz[static_cast<std::size_t>(r * g.ncol + (g.ncol - 1 - c))] = z[static_cast<std::size_t>(r * g.ncol + c)];
            }
        }
        GridSpec g2 = g;
        g2.x0 += 5;
        g2.y0 -= 3;
        std::vector<Point> moved;
        for (const auto& p : pp.points()) moved.push_back({6.0 - p.x, p.y - 3.0});
        const RocCurve t = roc_covariate_pp(PointPattern(moved, Window(5, 6, -3, -2)), Raster(g2, rz));
        check_same_knots(t, base);
    }
    SUBCASE("PIT identity: reversed curve is the ecdf of F0 at the data") {
        const RocCurve r = reverse(roc_covariate_pp(pp, z));
        const StepCdf f0 = spatial_cdf(z, w);
        std::vector<double> v;
        for (const auto& p : pp.points()) v.push_back(f0(z.at(p)));
        for (const auto& k : r.knots()) {
            double below = 0;
            for (double vi : v) below += (vi <= k.p + 1e-12) ? 1 : 0;
            CHECK(k.r == doctest::Approx(below / v.size()).epsilon(1e-12));
        }
    }
    SUBCASE("constant baseline equals unweighted") {
        const Raster b = Raster::constant(g, 0.3);
        check_same_knots(roc_covariate_pp(pp, z, Direction::high, &b), roc_covariate_pp(pp, z), 1e-13);
    }
    SUBCASE("empty pattern") {
        CHECK_THROWS_AS(roc_covariate_pp(PointPattern({}, w), z), InputError);
    }
    SUBCASE("missing covariate cells are counted") {
        std::vector<double> v(z.values().begin(), z.values().end());
        v[0] = NAN;
        v[1] = NAN;
        CHECK(roc_covariate_pp(pp, Raster(g, v)).excluded >= 2u);
    }
}

TEST_CASE("case-control") {
    SUBCASE("two cases above two controls") {
        CHECK(auc(roc_casecontrol(std::vector<double>{2, 3}, std::vector<double>{0, 1})) == 1.0);
    }
    SUBCASE("swapping labels gives 1 - AUC") {
        std::mt19937_64 rng(2);
        const Window w(0, 1, 0, 1);
        const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 10, 10);
        const Raster z = oracle::random_int_raster(rng, g, 6);
        const auto pts = oracle::uniform_points(rng, 50, 0, 1, 0, 1);
        std::vector<int> m(pts.size()), sw(pts.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            m[i] = i % 3 == 0 ? 1 : 0;
            sw[i] = 1 - m[i];
        }
        const double a = auc(roc_casecontrol(PointPattern(pts, w, m), z));
        const double b = auc(roc_casecontrol(PointPattern(pts, w, sw), z));
        CHECK(a + b == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("single class") {
        const Window w(0, 1, 0, 1);
        const Raster z = Raster::constant(GridSpec::tiling(0, 1, 0, 1, 2, 2), 1.0);
        CHECK_THROWS_AS(roc_casecontrol(PointPattern({{0.2, 0.2}}, w, std::vector<int>{1}), z), InputError);
    }
}

TEST_CASE("curve validation") {
    CHECK_THROWS_AS(RocCurve({{0, 0, 0}, {0.5, 0.7, 0}, {0.4, 1, 0}, {1, 1, 0}}, Direction::high,
                             FpConvention::area, Provenance::empirical),
                    InputError);
    CHECK_THROWS_AS(RocCurve({{0, 0, 0}, {0.9, 0.9, 0}}, Direction::high, FpConvention::area, Provenance::empirical),
                    InputError);
}
