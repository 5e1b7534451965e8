#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sproc/error.hpp"
#include "sproc/io.hpp"
#include "sproc/serialize.hpp"

using namespace sproc;

namespace {

const Window kUnit(0, 1, 0, 1);

RocCurve sample_curve(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 15, 15);
    const Raster z = oracle::random_raster(rng, g, -3, 7);
    return roc_covariate_pp(PointPattern(oracle::uniform_points(rng, 30, 0, 1, 0, 1), kUnit), z);
}

}  // namespace

TEST_CASE("ROC JSON round trip") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const RocCurve c = sample_curve(seed);
        const std::string text = dump_json(to_json(c));
        const RocCurve back = roc_from_json(parse_json(text));
        CHECK(dump_json(to_json(back)) == text);
        REQUIRE(back.size() == c.size());
        CHECK(back.direction() == c.direction());
        CHECK(back.provenance() == c.provenance());
        for (std::size_t i = 0; i < c.size(); ++i) {
            CHECK(back.knots()[i].p == round_sig12(c.knots()[i].p));
            CHECK(back.knots()[i].r == round_sig12(c.knots()[i].r));
        }
        CHECK(std::isnan(back.knots()[0].t));
    }
    const Json j = parse_json(dump_json(to_json(sample_curve(3))));
    CHECK(j["summary"].contains("auc"));
    CHECK(j["knots"][0].size() == 2u);
    CHECK_THROWS_AS(roc_from_json(parse_json("{\"knots\": []}")), InputError);
    CHECK_THROWS_AS(parse_json("{not json"), InputError);
}

TEST_CASE("numbers carry twelve significant digits and NaN becomes null") {
    const Json j{{"a", 1.0 / 3.0}, {"b", std::nan("")}, {"c", {2.0 / 3.0}}};
    const std::string s = dump_json(j);
    CHECK(s.find("0.333333333333") != std::string::npos);
    CHECK(s.find("0.3333333333333") == std::string::npos);
    CHECK(s.find("null") != std::string::npos);
    CHECK(s.find("0.666666666667") != std::string::npos);
}

TEST_CASE("CSV export") {
    const RocCurve c(std::vector<RocKnot>{{0, 0, std::nan("")}, {0.25, 0.5, 3.0}, {1, 1, 1.0}}, Direction::high,
                     FpConvention::area, Provenance::empirical);
    CHECK(roc_csv(c) == "p,r,t\n0,0,\n0.25,0.5,3\n1,1,1\n");
}

TEST_CASE("band, rho, test and model JSON") {
    const RocCurve c = sample_curve(7);
    const ConfidenceBand b = band_binomial(c, 30, 0.9, uniform_p_grid(11));
    const std::string bt = dump_json(to_json(b));
    const ConfidenceBand b2 = band_from_json(parse_json(bt));
    CHECK(dump_json(to_json(b2)) == bt);
    CHECK(b2.level == 0.9);
    CHECK(b2.p.size() == 11u);
    CHECK(band_csv(b).rfind("p,center,lower,upper,flagged\n", 0) == 0);

    RhoEstimate r;
    r.z = {0, 1, 2};
    r.rho = {1, std::nan(""), 3};
    r.kappa = 2;
    r.lambda_total = 5;
    const std::string rt = dump_json(to_json(r));
    const RhoEstimate r2 = rho_from_json(parse_json(rt));
    CHECK(std::isnan(r2.rho[1]));
    CHECK(dump_json(to_json(r2)) == rt);

    TestResult t{"ks", 0.123, 0.456, Sidedness::one, 17};
    const TestResult t2 = test_result_from_json(parse_json(dump_json(to_json(t))));
    CHECK(t2.method == "ks");
    CHECK(t2.sidedness == Sidedness::one);
    CHECK(t2.n == 17u);

    const GridSpec g = GridSpec::tiling(0, 1, 0, 1, 4, 4);
    const Raster x = Raster::from_function(g, [](double u, double) { return u; });
    ModelSpec m = model_from_json(parse_json(
        R"({"type":"poisson","coefficients":[1.5,2],"covariates":["x"],"offset":0,"convergence":{"iters":5,"tol":1e-8}})"));
    const std::vector<Raster> covs{x};
    const Raster lam = predict_raster(m, covs);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(lam[j] == doctest::Approx(std::exp(1.5 + 2 * x[j])));
    m.type = "logistic";
    const Raster pi = predict_raster(m, covs);
    CHECK(pi[0] == doctest::Approx(1 / (1 + std::exp(-(1.5 + 2 * x[0])))));
    CHECK_THROWS_AS(model_from_json(parse_json(R"({"type":"poisson","coefficients":[1],"covariates":["x"]})")),
                    InputError);
}

TEST_CASE("SVG plot") {
    const RocCurve c = sample_curve(9);
    const ConfidenceBand b = band_binomial(c, 30);
    const std::string s = roc_svg({&c}, &b, "a < b");
    CHECK(s.rfind("<svg", 0) == 0);
    CHECK(s.find("<polyline") != std::string::npos);
    CHECK(s.find("<polygon") != std::string::npos);
    CHECK(s.find("stroke-dasharray") != std::string::npos);
    CHECK(s.find("a &lt; b") != std::string::npos);
}
