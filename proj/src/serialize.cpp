#include "sproc/serialize.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sproc/error.hpp"
#include "sproc/io.hpp"

namespace sproc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void round_numbers(Json& j) {
    if (j.is_number_float()) {
        const double v = j.get<double>();
        j = std::isfinite(v) ? Json(round_sig12(v)) : Json(nullptr);
    } else if (j.is_structured()) {
        for (auto& e : j) round_numbers(e);
    }
}

std::string xml_escape(const std::string& in) {
    std::string out;
    for (char ch : in) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

double num(const Json& j) { return j.is_null() ? kNaN : j.get<double>(); }

std::vector<double> nums(const Json& j) {
    std::vector<double> v;
    for (const auto& e : j) v.push_back(num(e));
    return v;
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw InputError(std::string("JSON is missing field '") + key + "'");
    }
    return j.at(key);
}

}  // namespace

std::string dump_json(const Json& j) {
    Json copy = j;
    round_numbers(copy);
    return copy.dump(2) + "\n";
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

Json to_json(const RocCurve& c) {
    Json knots = Json::array();
    for (const auto& k : c.knots()) {
        Json row = Json::array({k.p, k.r});
        if (!std::isnan(k.t)) row.push_back(k.t);
        knots.push_back(std::move(row));
    }
    // summary of the curve as written, so a parsed copy reproduces it
    std::vector<RocKnot> rounded(c.knots().begin(), c.knots().end());
    for (auto& k : rounded) k.p = round_sig12(k.p), k.r = round_sig12(k.r);
    const RocSummary s = summarize(RocCurve(std::move(rounded), c.direction(), c.fp_convention(), c.provenance()));
    return Json{{"direction", to_string(c.direction())},
                {"fp_convention", to_string(c.fp_convention())},
                {"provenance", to_string(c.provenance())},
                {"excluded", c.excluded},
                {"knots", std::move(knots)},
                {"summary",
                 {{"auc", s.auc}, {"youden1", s.youden_one_sided}, {"youden2", s.youden_two_sided}, {"gini", s.gini}}}};
}

RocCurve roc_from_json(const Json& j) {
    try {
        std::vector<RocKnot> knots;
        for (const auto& row : field(j, "knots")) {
            if (!row.is_array() || row.size() < 2) throw InputError("knot must be [p, r] or [p, r, t]");
            knots.push_back({num(row[0]), num(row[1]), row.size() > 2 ? num(row[2]) : kNaN});
        }
        RocCurve c(std::move(knots), direction_from_string(field(j, "direction").get<std::string>()),
                   fp_convention_from_string(field(j, "fp_convention").get<std::string>()),
                   provenance_from_string(field(j, "provenance").get<std::string>()));
        if (j.contains("excluded")) c.excluded = j.at("excluded").get<std::size_t>();
        return c;
    } catch (const Json::exception& e) {
        throw InputError(std::string("bad ROC JSON: ") + e.what());
    }
}

std::string roc_csv(const RocCurve& c) {
    std::string out = "p,r,t\n";
    for (const auto& k : c.knots()) {
        out += format_number(k.p) + "," + format_number(k.r) + "," + (std::isnan(k.t) ? "" : format_number(k.t)) + "\n";
    }
    return out;
}

Json to_json(const TestResult& t) {
    return Json{{"method", t.method},
                {"statistic", t.statistic},
                {"p_value", t.p_value},
                {"sidedness", to_string(t.sidedness)},
                {"n", t.n}};
}

TestResult test_result_from_json(const Json& j) {
    try {
        TestResult t;
        t.method = field(j, "method").get<std::string>();
        t.statistic = num(field(j, "statistic"));
        t.p_value = num(field(j, "p_value"));
        const std::string s = field(j, "sidedness").get<std::string>();
        if (s != "one" && s != "two") throw InputError("sidedness must be one or two");
        t.sidedness = s == "one" ? Sidedness::one : Sidedness::two;
        t.n = field(j, "n").get<std::size_t>();
        return t;
    } catch (const Json::exception& e) {
        throw InputError(std::string("bad test JSON: ") + e.what());
    }
}

Json to_json(const BermanResult& b) { return Json{{"z1", to_json(b.z1)}, {"z2", to_json(b.z2)}}; }

Json to_json(const CdfTestResult& c) {
    return Json{{"ks", to_json(c.ks)},
                {"ks_one_sided", to_json(c.ks_one_sided)},
                {"cvm", to_json(c.cvm)},
                {"ad", to_json(c.ad)}};
}

Json to_json(const WilcoxonResult& w) { return Json{{"test", to_json(w.test)}, {"auc", w.auc}}; }

Json to_json(const ConfidenceBand& b) {
    return Json{{"method", to_string(b.method)}, {"level", b.level}, {"nsim", b.nsim},
                {"failures", b.failures},        {"p", b.p},         {"center", b.center},
                {"lower", b.lower},              {"upper", b.upper}, {"flagged", b.flagged}};
}

ConfidenceBand band_from_json(const Json& j) {
    try {
        ConfidenceBand b;
        b.method = band_method_from_string(field(j, "method").get<std::string>());
        b.level = num(field(j, "level"));
        b.nsim = field(j, "nsim").get<std::size_t>();
        b.failures = field(j, "failures").get<std::size_t>();
        b.p = nums(field(j, "p"));
        b.center = nums(field(j, "center"));
        b.lower = nums(field(j, "lower"));
        b.upper = nums(field(j, "upper"));
        b.flagged = field(j, "flagged").get<std::vector<std::uint8_t>>();
        const std::size_t m = b.p.size();
        if (b.center.size() != m || b.lower.size() != m || b.upper.size() != m) {
            throw InputError("band arrays differ in length");
        }
        return b;
    } catch (const Json::exception& e) {
        throw InputError(std::string("bad band JSON: ") + e.what());
    }
}

std::string band_csv(const ConfidenceBand& b) {
    std::string out = "p,center,lower,upper,flagged\n";
    for (std::size_t i = 0; i < b.p.size(); ++i) {
        out += format_number(b.p[i]) + "," + format_number(b.center[i]) + "," + format_number(b.lower[i]) + "," +
               format_number(b.upper[i]) + "," + (i < b.flagged.size() && b.flagged[i] ? "1" : "0") + "\n";
    }
    return out;
}

Json to_json(const RhoEstimate& r) {
    Json j{{"method", to_string(r.method)}, {"z", r.z},
           {"rho", r.rho},                  {"kappa", r.kappa},
           {"lambda_total", r.lambda_total}, {"bandwidth", r.bandwidth}};
    if (r.lower) j["lower"] = *r.lower;
    if (r.upper) j["upper"] = *r.upper;
    return j;
}

RhoEstimate rho_from_json(const Json& j) {
    try {
        RhoEstimate r;
        r.method = rho_method_from_string(field(j, "method").get<std::string>());
        r.z = nums(field(j, "z"));
        r.rho = nums(field(j, "rho"));
        r.kappa = num(field(j, "kappa"));
        r.lambda_total = num(field(j, "lambda_total"));
        if (j.contains("bandwidth")) r.bandwidth = num(j.at("bandwidth"));
        if (j.contains("lower")) r.lower = nums(j.at("lower"));
        if (j.contains("upper")) r.upper = nums(j.at("upper"));
        if (r.z.size() != r.rho.size()) throw InputError("rho and z differ in length");
        return r;
    } catch (const Json::exception& e) {
        throw InputError(std::string("bad rho JSON: ") + e.what());
    }
}

Json to_json(const CurveReport& r) {
    return Json{{"name", r.name},
                {"max_violation", r.max_violation},
                {"classification", r.classification},
                {"p_grid", r.p_grid}};
}

Json to_json(const ConcavityReport& r) {
    return Json{{"name", "concavity"},
                {"max_violation", r.max_violation()},
                {"classification", r.classification},
                {"concavity_violation", r.concavity_violation},
                {"convexity_violation", r.convexity_violation}};
}

namespace {

Json model_json(const char* type, const std::vector<double>& coef, const std::vector<double>& se,
                const std::vector<std::string>& names, double offset, const Convergence& conv,
                const std::vector<std::string>& aliased) {
    return Json{{"type", type},
                {"coefficients", coef},
                {"std_errors", se},
                {"covariates", names},
                {"offset", offset},
                {"convergence", {{"iters", conv.iterations}, {"tol", conv.tol}, {"converged", conv.converged}}},
                {"aliased", aliased}};
}

}  // namespace

Json to_json(const PoissonPPModel& m) {
    return model_json("poisson", m.coefficients, m.std_errors, m.covariate_names, 0.0, m.convergence, m.aliased);
}

Json to_json(const LogisticModel& m) {
    return model_json("logistic", m.coefficients, m.std_errors, m.covariate_names, m.offset, m.convergence,
                      m.aliased);
}

ModelSpec model_from_json(const Json& j) {
    try {
        ModelSpec m;
        m.type = field(j, "type").get<std::string>();
        if (m.type != "poisson" && m.type != "logistic") throw InputError("model type must be poisson or logistic");
        m.coefficients = nums(field(j, "coefficients"));
        m.covariates = field(j, "covariates").get<std::vector<std::string>>();
        if (j.contains("offset")) m.offset = num(j.at("offset"));
        if (j.contains("convergence")) {
            m.iterations = j.at("convergence").value("iters", 0);
            m.tol = j.at("convergence").value("tol", 0.0);
        }
        if (m.coefficients.size() != m.covariates.size() + 1) {
            throw InputError("model needs an intercept plus one coefficient per covariate");
        }
        return m;
    } catch (const Json::exception& e) {
        throw InputError(std::string("bad model JSON: ") + e.what());
    }
}

Raster predict_raster(const ModelSpec& m, std::span<const Raster> covariates) {
    if (covariates.size() != m.covariates.size()) {
        throw InputError("model has " + std::to_string(m.covariates.size()) + " covariates, got " +
                         std::to_string(covariates.size()) + " rasters");
    }
    if (covariates.empty()) {
        throw InputError("prediction needs at least one covariate raster for its grid");
    }
    const GridSpec& g = covariates.front().grid();
    for (const auto& r : covariates) {
        if (!(r.grid() == g)) throw InputError("covariate rasters must share one grid");
    }
    std::vector<double> out(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        double eta = m.offset + m.coefficients[0];
        for (std::size_t k = 0; k < covariates.size(); ++k) eta += m.coefficients[k + 1] * covariates[k][j];
        out[j] = m.type == "poisson" ? std::exp(eta) : 1.0 / (1.0 + std::exp(-eta));
    }
    return Raster(g, std::move(out));
}

Json panel_json(const std::vector<PartialRoc>& panel, const std::vector<std::string>& curve_refs) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < panel.size(); ++i) {
        arr.push_back({{"covariate", panel[i].covariate},
                       {"partial_auc", panel[i].partial_auc},
                       {"curve_ref", i < curve_refs.size() ? curve_refs[i] : ""}});
    }
    return arr;
}

std::string roc_svg(const std::vector<const RocCurve*>& curves, const ConfidenceBand* band, const std::string& title) {
    constexpr double size = 400, pad = 40;
    auto px = [&](double p) { return format_number(std::round((pad + p * size) * 100) / 100); };
    auto py = [&](double r) { return format_number(std::round((pad + (1 - r) * size) * 100) / 100); };
    static const char* colours[] = {"#1f4e9c", "#b3261e", "#2e7d32", "#6a1b9a"};
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * pad << "\" height=\"" << size + 2 * pad
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << size << "\" height=\"" << size
      << "\" fill=\"white\" stroke=\"black\"/>\n";
    if (band && !band->p.empty()) {
        s << "<polygon fill=\"#c8d6ee\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < band->p.size(); ++i) s << px(band->p[i]) << "," << py(band->upper[i]) << " ";
        for (std::size_t i = band->p.size(); i-- > 0;) s << px(band->p[i]) << "," << py(band->lower[i]) << " ";
        s << "\"/>\n";
    }
    s << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\"" << py(1)
      << "\" stroke=\"grey\" stroke-dasharray=\"4 4\"/>\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        s << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << colours[c % 4] << "\" points=\"";
        for (const auto& k : curves[c]->knots()) s << px(k.p) << "," << py(k.r) << " ";
        s << "\"/>\n";
    }
    s << "<text x=\"" << pad + size / 2 << "\" y=\"" << size + 2 * pad - 10 << "\" text-anchor=\"middle\">p</text>\n";
    s << "<text x=\"12\" y=\"" << pad + size / 2 << "\">R(p)</text>\n";
    if (!title.empty()) {
        s << "<text x=\"" << pad + size / 2 << "\" y=\"24\" text-anchor=\"middle\">" << xml_escape(title) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace sproc
