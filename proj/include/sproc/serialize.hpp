#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sproc/extensions.hpp"
#include "sproc/inference.hpp"
#include "sproc/model_fit.hpp"
#include "sproc/model_roc.hpp"
#include "sproc/rho.hpp"
#include "sproc/roc.hpp"

namespace sproc {

using Json = nlohmann::ordered_json;

// Numbers are rounded to 12 significant digits on the way out and NaN is
// written as null, so parse(dump(x)) dumps to the same bytes.
std::string dump_json(const Json& j);
Json parse_json(const std::string& text);

Json to_json(const RocCurve& c);
RocCurve roc_from_json(const Json& j);
// p,r,t rows; the origin knot has an empty t.
std::string roc_csv(const RocCurve& c);

Json to_json(const TestResult& t);
TestResult test_result_from_json(const Json& j);
Json to_json(const BermanResult& b);
Json to_json(const CdfTestResult& c);
Json to_json(const WilcoxonResult& w);

Json to_json(const ConfidenceBand& b);
ConfidenceBand band_from_json(const Json& j);
std::string band_csv(const ConfidenceBand& b);

Json to_json(const RhoEstimate& r);
RhoEstimate rho_from_json(const Json& j);

Json to_json(const CurveReport& r);
Json to_json(const ConcavityReport& r);

// {type, coefficients, covariates, offset, convergence:{iters,tol}} plus
// standard errors and aliased names.
Json to_json(const PoissonPPModel& m);
Json to_json(const LogisticModel& m);

struct ModelSpec {
    std::string type;  // "poisson" or "logistic"
    std::vector<double> coefficients;
    std::vector<std::string> covariates;
    double offset = 0.0;
    int iterations = 0;
    double tol = 0.0;
};
ModelSpec model_from_json(const Json& j);
// Linear predictor offset + b0 + sum b_k Z_k per cell, through exp (poisson)
// or the logistic function. NaN where any covariate is missing.
Raster predict_raster(const ModelSpec& m, std::span<const Raster> covariates);

// [{covariate, partial_auc, curve_ref}]
Json panel_json(const std::vector<PartialRoc>& panel, const std::vector<std::string>& curve_refs);

// Static SVG of one or more curves over the unit square with the diagonal
// and, when given, the band as a shaded polygon.
std::string roc_svg(const std::vector<const RocCurve*>& curves, const ConfidenceBand* band = nullptr,
                    const std::string& title = "");

}  // namespace sproc
