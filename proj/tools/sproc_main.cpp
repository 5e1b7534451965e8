#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "sproc/error.hpp"
#include "sproc/extensions.hpp"
#include "sproc/inference.hpp"
#include "sproc/io.hpp"
#include "sproc/model_fit.hpp"
#include "sproc/model_roc.hpp"
#include "sproc/parallel.hpp"
#include "sproc/rho.hpp"
#include "sproc/serialize.hpp"
#include "sproc/smoothing.hpp"

namespace fs = std::filesystem;
using namespace sproc;

namespace {

struct Options {
    // inputs
    std::string points, raster, window, baseline, weights_column, presence, intensity, score, model;
    std::vector<std::string> covariates, names, candidates, drop;
    // settings
    std::string direction = "high", fp, fit = "poisson", method, alternative = "two_sided", kernel = "gaussian";
    bool loo = false, predicted = false;
    double level = 0.95;
    std::optional<double> bandwidth, h1, h2;
    std::size_t nsim = 99, rank = 1, grid_points = 512, p_points = 101;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    // outputs
    std::string out_dir = ".", name;
};

// Everything is computed before anything is written, so an error leaves no
// output files behind.
class Outputs {
public:
    Outputs(fs::path dir, std::string stem) : dir_(std::move(dir)), stem_(std::move(stem)) {}
    void add(const std::string& suffix, std::string content) { files_.emplace_back(dir_ / (stem_ + suffix), std::move(content)); }
    const std::string& stem() const { return stem_; }
    void commit() const {
        fs::create_directories(dir_);
        for (const auto& [path, content] : files_) write_text_atomic(path, content);
    }

private:
    fs::path dir_;
    std::string stem_;
    std::vector<std::pair<fs::path, std::string>> files_;
};

unsigned thread_count(const Options& o) {
    // the environment overrides the flag
    if (const char* env = std::getenv("SPROC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return o.threads;
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw InputError(std::string("missing required option ") + flag);
}

Raster load_raster(const std::string& path, const char* flag) {
    require(path, flag);
    return read_esri_ascii(path);
}

std::vector<Raster> load_covariates(const Options& o) {
    if (o.covariates.empty()) throw InputError("missing required option --covariates");
    std::vector<Raster> out;
    for (const auto& p : o.covariates) out.push_back(read_esri_ascii(p));
    return out;
}

std::vector<std::string> covariate_names(const Options& o) {
    if (!o.names.empty()) {
        if (o.names.size() != o.covariates.size()) throw InputError("--names needs one name per covariate");
        return o.names;
    }
    std::vector<std::string> out;
    for (const auto& p : o.covariates) out.push_back(fs::path(p).stem().string());
    return out;
}

Window load_window(const Options& o, const GridSpec* fallback) {
    if (!o.window.empty()) return read_window_json(o.window);
    if (!fallback) throw InputError("missing required option --window");
    return window_of(*fallback);
}

PointPattern load_points(const Options& o, const Window& w) {
    require(o.points, "--points");
    return read_points_csv(o.points, w, o.weights_column);
}

PresenceGrid load_presence(const Options& o) {
    const Raster r = load_raster(o.presence, "--presence");
    std::vector<Presence> st(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double v = r[j];
        if (std::isnan(v)) {
            st[j] = Presence::unknown;
        } else if (v == 1.0) {
            st[j] = Presence::present;
        } else if (v == 0.0) {
            st[j] = Presence::absent;
        } else {
            throw InputError("presence grid values must be 0, 1 or NODATA");
        }
    }
    return PresenceGrid(r.grid(), std::move(st));
}

FpConvention fp_for(const Options& o, FpConvention fallback) {
    return o.fp.empty() ? fallback : fp_convention_from_string(o.fp);
}

std::pair<std::vector<double>, std::vector<double>> case_control_scores(const PointPattern& pp, const Raster& z) {
    if (!pp.marks()) throw InputError("case-control data need a mark column (1 = case, 0 = control)");
    std::vector<double> cases, controls;
    for (std::size_t i = 0; i < pp.size(); ++i) {
        const double v = z.at(pp.points()[i]);
        if (std::isnan(v)) continue;
        ((*pp.marks())[i] == 1 ? cases : controls).push_back(v);
    }
    return {cases, controls};
}

void emit_curve(Outputs& out, const RocCurve& c, const std::string& suffix = "", const ConfidenceBand* band = nullptr,
                const std::vector<const RocCurve*>& extra = {}) {
    out.add(suffix + ".json", dump_json(to_json(c)));
    out.add(suffix + ".csv", roc_csv(c));
    std::vector<const RocCurve*> curves{&c};
    curves.insert(curves.end(), extra.begin(), extra.end());
    out.add(suffix + ".svg", roc_svg(curves, band, out.stem() + suffix));
    std::printf("%s%s: AUC %s, %zu knots\n", out.stem().c_str(), suffix.c_str(), format_number(auc(c)).c_str(),
                c.size());
}

// --------------------------------------------------------------------- roc

void run_roc(const std::string& kind, const Options& o, Outputs& out) {
    const Direction dir = direction_from_string(o.direction);
    if (kind == "covariate") {
        const Raster z = load_raster(o.raster, "--raster");
        if (!o.presence.empty()) {
            const PresenceGrid g = load_presence(o);
            std::optional<Raster> b;
            if (!o.baseline.empty()) b = read_esri_ascii(o.baseline);
            emit_curve(out, roc_covariate_grid(g, z, dir, fp_for(o, FpConvention::all_pixels), b ? &*b : nullptr));
            return;
        }
        const Window w = load_window(o, &z.grid());
        const PointPattern pp = load_points(o, w);
        std::optional<Raster> b;
        if (!o.baseline.empty()) b = read_esri_ascii(o.baseline);
        emit_curve(out, roc_covariate_pp(pp, z, dir, b ? &*b : nullptr));
    } else if (kind == "model") {
        const std::vector<Raster> covs = load_covariates(o);
        const std::vector<std::string> names = covariate_names(o);
        const unsigned threads = thread_count(o);
        if (o.fit == "poisson") {
            const Window w = load_window(o, &covs.front().grid());
            const PointPattern pp = load_points(o, w);
            const PoissonPPModel m = fit_poisson_loglinear(pp, covs, names);
            if (!m.convergence.converged) throw NumericalError("Poisson fit did not converge");
            out.add("_model.json", dump_json(to_json(m)));
            const RocCurve c = roc_model_pp(m, pp, o.loo, threads);
            if (o.predicted) {
                const RocCurve pr = roc_model_predicted(m, w);
                emit_curve(out, pr, "_predicted");
                emit_curve(out, c, "", nullptr, {&pr});
            } else {
                emit_curve(out, c);
            }
        } else if (o.fit == "logistic") {
            const PresenceGrid g = load_presence(o);
            const LogisticModel m = fit_logistic(g, covs, names);
            if (!m.convergence.converged) throw NumericalError("logistic fit did not converge");
            out.add("_model.json", dump_json(to_json(m)));
            const RocCurve c = roc_model_grid(m, g, o.loo, fp_for(o, FpConvention::absence), threads);
            if (o.predicted) {
                const RocCurve pr = roc_model_predicted(m);
                emit_curve(out, pr, "_predicted");
                emit_curve(out, c, "", nullptr, {&pr});
            } else {
                emit_curve(out, c);
            }
        } else {
            throw InputError("--fit must be poisson or logistic");
        }
    } else if (kind == "casecontrol") {
        const Raster z = load_raster(o.raster, "--raster");
        const Window w = load_window(o, &z.grid());
        const PointPattern pp = load_points(o, w);
        emit_curve(out, roc_casecontrol(pp, z, dir));
    } else if (kind == "theoretical") {
        const Raster s = load_raster(o.score, "--score");
        const Raster lam = load_raster(o.intensity, "--intensity");
        const Window w = load_window(o, &s.grid());
        std::optional<Raster> b;
        if (!o.baseline.empty()) b = read_esri_ascii(o.baseline);
        TheoreticalRocInput in{s, lam, w, b, dir};
        if (!o.fp.empty()) in.fp = fp_convention_from_string(o.fp);
        emit_curve(out, roc_theoretical(in));
    }
}

// -------------------------------------------------------------------- test

void print_test(const TestResult& t) {
    std::printf("%s: statistic %s, p-value %s, n %zu (%s-sided)\n", t.method.c_str(),
                format_number(t.statistic).c_str(), format_number(t.p_value).c_str(), t.n,
                std::string(to_string(t.sidedness)).c_str());
}

void run_test(const std::string& kind, const Options& o, Outputs& out) {
    const Raster z = load_raster(o.raster, "--raster");
    const Window w = load_window(o, &z.grid());
    const PointPattern pp = load_points(o, w);
    const Alternative alt = alternative_from_string(o.alternative);
    Json j;
    if (kind == "berman") {
        const BermanResult b = berman_tests(pp, z, w, alt);
        print_test(b.z1);
        print_test(b.z2);
        j = to_json(b);
    } else if (kind == "wilcoxon") {
        const auto [cases, controls] = case_control_scores(pp, z);
        const WilcoxonResult r = wilcoxon_auc(cases, controls, alt);
        print_test(r.test);
        std::printf("auc: %s\n", format_number(r.auc).c_str());
        j = to_json(r);
    } else {
        const CdfTestResult c = cdf_tests(pp, z, w);
        if (kind == "ks") {
            print_test(c.ks);
            print_test(c.ks_one_sided);
            j = Json{{"ks", to_json(c.ks)}, {"ks_one_sided", to_json(c.ks_one_sided)}};
        } else {
            const TestResult& t = kind == "cvm" ? c.cvm : c.ad;
            print_test(t);
            j = to_json(t);
        }
    }
    out.add(".json", dump_json(j));
}

// --------------------------------------------------------------------- rho

void run_rho(const Options& o, Outputs& out) {
    const Raster z = load_raster(o.raster, "--raster");
    const Window w = load_window(o, &z.grid());
    const PointPattern pp = load_points(o, w);
    const std::string method = o.method.empty() ? "kernel" : o.method;
    const RhoMethod m = rho_method_from_string(method);
    const Direction dir = direction_from_string(o.direction);
    RhoEstimate r;
    switch (m) {
        case RhoMethod::kernel: r = estimate_rho_kernel(pp, z, w, o.bandwidth, o.grid_points); break;
        case RhoMethod::isotonic: r = estimate_rho_isotonic(pp, z, w, dir); break;
        case RhoMethod::parametric_loglinear: r = estimate_rho_loglinear(pp, z, w, o.grid_points); break;
        case RhoMethod::from_roc: throw InputError("rho --method from-roc is a library routine only");
    }
    std::vector<std::string> warnings;
    const RocCurve c = roc_from_rho(r, spatial_cdf(z, w), r.kappa, dir, &warnings);
    for (const auto& msg : warnings) std::fprintf(stderr, "warning: %s\n", msg.c_str());
    out.add(".json", dump_json(to_json(r)));
    std::printf("%s: %s rho on %zu z values, kappa %s, lambda_total %s\n", out.stem().c_str(), method.c_str(),
                r.z.size(), format_number(r.kappa).c_str(), format_number(r.lambda_total).c_str());
    emit_curve(out, c, "_roc");
}

// ----------------------------------------------------------------- partial

void run_partial(const std::string& kind, const Options& o, Outputs& out) {
    const Direction dir = direction_from_string(o.direction);
    const bool poisson = o.fit == "poisson";
    if (!poisson && o.fit != "logistic") throw InputError("--fit must be poisson or logistic");
    std::vector<PartialRoc> panel;
    const std::vector<Raster> covs = load_covariates(o);
    const std::vector<std::string> names = covariate_names(o);

    if (kind == "add") {
        if (o.candidates.empty()) throw InputError("missing required option --candidate");
        std::vector<Raster> cand;
        for (const auto& p : o.candidates) cand.push_back(read_esri_ascii(p));
        // the original model: read from --model or fitted here
        std::optional<ModelSpec> spec;
        if (!o.model.empty()) {
            spec = model_from_json(parse_json(read_text(o.model)));
            if ((spec->type == "poisson") != poisson) throw InputError("--fit does not match the model type");
        }
        if (poisson) {
            const Window w = load_window(o, &covs.front().grid());
            const PointPattern pp = load_points(o, w);
            PoissonPPModel m;
            if (spec) {
                m.fitted = predict_raster(*spec, covs);
            } else {
                m = fit_poisson_loglinear(pp, covs, names);
            }
            for (std::size_t k = 0; k < cand.size(); ++k) {
                panel.push_back(partial_roc_add(m, cand[k], pp, fs::path(o.candidates[k]).stem().string(), dir));
            }
        } else {
            const PresenceGrid g = load_presence(o);
            LogisticModel m;
            if (spec) {
                const Raster pi = predict_raster(*spec, covs);
                m.fitted = ProbabilityGrid(pi.grid(), std::vector<double>(pi.values().begin(), pi.values().end()));
            } else {
                m = fit_logistic(g, covs, names);
            }
            for (std::size_t k = 0; k < cand.size(); ++k) {
                panel.push_back(partial_roc_add(m, cand[k], g, fs::path(o.candidates[k]).stem().string(), dir,
                                                fp_for(o, FpConvention::absence)));
            }
        }
    } else {
        const std::vector<std::string> drops = o.drop.empty() ? names : o.drop;
        if (poisson) {
            const Window w = load_window(o, &covs.front().grid());
            const PointPattern pp = load_points(o, w);
            const PoissonPPModel m = fit_poisson_loglinear(pp, covs, names);
            if (!m.convergence.converged) throw NumericalError("Poisson fit did not converge");
            for (const auto& d : drops) panel.push_back(partial_roc_drop(m, covs, pp, d, dir));
        } else {
            const PresenceGrid g = load_presence(o);
            const LogisticModel m = fit_logistic(g, covs, names);
            if (!m.convergence.converged) throw NumericalError("logistic fit did not converge");
            for (const auto& d : drops) {
                panel.push_back(partial_roc_drop(m, covs, g, d, dir, fp_for(o, FpConvention::absence)));
            }
        }
    }
    std::vector<std::string> refs;
    for (const auto& p : panel) {
        const std::string suffix = "_" + p.covariate;
        refs.push_back(out.stem() + suffix + ".json");
        emit_curve(out, p.curve, suffix);
    }
    out.add(".json", dump_json(panel_json(panel, refs)));
}

// -------------------------------------------------------------------- band

BandMethod band_method(const std::string& s) {
    static const std::map<std::string, BandMethod> alias{{"binomial", BandMethod::binomial_plugin},
                                                         {"smooth", BandMethod::smooth_plugin},
                                                         {"montecarlo", BandMethod::monte_carlo},
                                                         {"monte-carlo", BandMethod::monte_carlo}};
    const auto it = alias.find(s);
    return it != alias.end() ? it->second : band_method_from_string(s);
}

void run_band(const Options& o, Outputs& out) {
    require(o.method, "--method");
    const BandMethod bm = band_method(o.method);
    const Direction dir = direction_from_string(o.direction);
    const std::vector<double> grid = uniform_p_grid(o.p_points);
    SimulationOptions sim;
    sim.nsim = o.nsim;
    sim.level = o.level;
    sim.seed = o.seed;
    sim.threads = thread_count(o);
    sim.p_grid = grid;

    std::optional<RocCurve> curve;
    ConfidenceBand band;
    switch (bm) {
        case BandMethod::binomial_plugin: {
            const Raster z = load_raster(o.raster, "--raster");
            const Window w = load_window(o, &z.grid());
            const PointPattern pp = load_points(o, w);
            curve = roc_covariate_pp(pp, z, dir);
            band = band_binomial(*curve, pp.size(), o.level, grid);
            break;
        }
        case BandMethod::smooth_plugin: {
            const Raster z = load_raster(o.raster, "--raster");
            const Window w = load_window(o, &z.grid());
            const auto [cases, controls] = case_control_scores(load_points(o, w), z);
            KernelSpec k;
            k.kernel = kernel_from_string(o.kernel);
            k.h1 = o.h1;
            k.h2 = o.h2;
            curve = smooth_roc(cases, controls, k);
            band = smooth_band(cases, controls, k, o.level, grid);
            break;
        }
        case BandMethod::monte_carlo: {
            const std::vector<Raster> covs = load_covariates(o);
            const std::vector<std::string> names = covariate_names(o);
            if (o.fit == "logistic") {
                const PresenceGrid g = load_presence(o);
                const LogisticModel m = fit_logistic(g, covs, names);
                curve = roc_model_grid(m, g, false, fp_for(o, FpConvention::absence));
                band = band_monte_carlo(m, covs, g, sim);
            } else {
                const Window w = load_window(o, &covs.front().grid());
                const PointPattern pp = load_points(o, w);
                const PoissonPPModel m = fit_poisson_loglinear(pp, covs, names);
                curve = roc_model_pp(m.fitted, pp);
                band = band_monte_carlo(m, covs, pp, sim);
            }
            break;
        }
        case BandMethod::envelope: {
            const Raster z = load_raster(o.raster, "--raster");
            const Window w = load_window(o, &z.grid());
            EnvelopeOptions env;
            static_cast<SimulationOptions&>(env) = sim;
            env.rank = o.rank;
            env.direction = dir;
            if (!o.intensity.empty()) {
                band = envelope(read_esri_ascii(o.intensity), z, w, env);
                if (!o.points.empty()) curve = roc_covariate_pp(load_points(o, w), z, dir);
            } else {
                const std::vector<Raster> covs = load_covariates(o);
                const PointPattern pp = load_points(o, w);
                const PoissonPPModel m = fit_poisson_loglinear(pp, covs, covariate_names(o));
                band = envelope(m, z, w, env);
                curve = roc_covariate_pp(pp, z, dir);
            }
            break;
        }
    }
    out.add(".json", dump_json(to_json(band)));
    out.add(".csv", band_csv(band));
    std::printf("%s: %s band, level %s, %zu grid points", out.stem().c_str(), std::string(to_string(band.method)).c_str(),
                format_number(band.level).c_str(), band.p.size());
    if (band.nsim > 0) std::printf(", %zu simulations, %zu failures", band.nsim, band.failures);
    if (curve) std::printf(", curve inside at %s of points", format_number(band_inclusion(band, *curve)).c_str());
    std::printf("\n");
    if (curve) {
        emit_curve(out, *curve, "_curve", &band);
    } else {
        out.add(".svg", roc_svg({}, &band, out.stem()));
    }
}

// ---------------------------------------------------------------- simulate

void run_simulate(const Options& o, Outputs& out) {
    const Raster lam = load_raster(o.intensity, "--intensity");
    const Window w = load_window(o, &lam.grid());
    const PointPattern pp = simulate_poisson(lam, w, o.seed);
    out.add(".csv", format_points_csv(pp));
    std::printf("%s: %zu points\n", out.stem().c_str(), pp.size());
}

// ------------------------------------------------------------------ wiring

void data_options(CLI::App* c, Options& o) {
    c->add_option("--points", o.points, "points CSV (x,y[,mark][,weight])");
    c->add_option("--raster", o.raster, "covariate raster (ESRI ASCII)");
    c->add_option("--window", o.window, "window JSON; default: the raster's bounding box");
    c->add_option("--weights-column", o.weights_column, "weight column of the points CSV");
    c->add_option("--presence", o.presence, "presence grid raster: 1 present, 0 absent, NODATA unknown");
    c->add_option("--direction", o.direction, "high or low")->check(CLI::IsMember({"high", "low"}));
}

void model_options(CLI::App* c, Options& o) {
    c->add_option("--fit", o.fit, "poisson or logistic")->check(CLI::IsMember({"poisson", "logistic"}));
    c->add_option("--covariates", o.covariates, "covariate rasters");
    c->add_option("--names", o.names, "covariate names; default: file stems");
    c->add_option("--fp", o.fp, "absence, all_pixels or area");
}

void output_options(CLI::App* c, Options& o, const std::string& default_name) {
    c->add_option("-o,--out-dir", o.out_dir, "output directory");
    c->add_option("--name", o.name, "output file stem (default: " + default_name + ")");
    c->callback([&o, default_name] {
        if (o.name.empty()) o.name = default_name;
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial ROC analysis"};
    app.require_subcommand(1);
    // subcommands inherit this, so global options may follow them
    app.fallthrough();
    Options o;
    app.add_option("--threads", o.threads, "worker threads (0 = all; SPROC_THREADS overrides)");

    auto* roc = app.add_subcommand("roc", "ROC curves")->require_subcommand(1);
    std::map<CLI::App*, std::string> leaf;
    for (const char* kind : {"covariate", "model", "casecontrol", "theoretical"}) {
        auto* c = roc->add_subcommand(kind);
        data_options(c, o);
        model_options(c, o);
        c->add_option("--baseline", o.baseline, "baseline raster for the FP measure");
        c->add_option("--score", o.score, "score raster (theoretical)");
        c->add_option("--intensity", o.intensity, "intensity raster (theoretical)");
        c->add_flag("--loo", o.loo, "leave-one-out fitted values (model)");
        c->add_flag("--predicted", o.predicted, "also write the model-predicted curve (model)");
        output_options(c, o, "roc");
        leaf[c] = kind;
    }

    auto* test = app.add_subcommand("test", "goodness-of-fit tests")->require_subcommand(1);
    for (const char* kind : {"berman", "ks", "cvm", "ad", "wilcoxon"}) {
        auto* c = test->add_subcommand(kind);
        data_options(c, o);
        c->add_option("--alternative", o.alternative, "two_sided, greater or less");
        output_options(c, o, kind);
        leaf[c] = kind;
    }

    auto* rho = app.add_subcommand("rho", "rho(z) estimate and the curve it implies");
    data_options(rho, o);
    rho->add_option("--method", o.method, "kernel, isotonic or parametric-loglinear");
    rho->add_option("--bandwidth", o.bandwidth, "kernel bandwidth; default: Silverman");
    rho->add_option("--grid-points", o.grid_points, "z-grid size");
    output_options(rho, o, "rho");

    auto* partial = app.add_subcommand("partial", "partial ROC panels")->require_subcommand(1);
    for (const char* kind : {"add", "drop"}) {
        auto* c = partial->add_subcommand(kind);
        data_options(c, o);
        model_options(c, o);
        c->add_option("--model", o.model, "model JSON of the original fit (add)");
        c->add_option("--candidate", o.candidates, "candidate rasters (add)");
        c->add_option("--drop", o.drop, "covariates to drop; default: each in turn");
        output_options(c, o, "partial");
        leaf[c] = kind;
    }

    auto* band = app.add_subcommand("band", "confidence bands and envelopes");
    data_options(band, o);
    model_options(band, o);
    band->add_option("--method", o.method, "binomial, smooth, montecarlo or envelope");
    band->add_option("--intensity", o.intensity, "intensity raster to simulate from (envelope)");
    band->add_option("--nsim", o.nsim, "simulations");
    band->add_option("--seed", o.seed, "master seed");
    band->add_option("--level", o.level, "pointwise level")->check(CLI::Range(0.0, 1.0));
    band->add_option("--rank", o.rank, "envelope rank");
    band->add_option("--p-points", o.p_points, "size of the uniform p-grid");
    band->add_option("--kernel", o.kernel, "gaussian or epanechnikov (smooth)");
    band->add_option("--h1", o.h1, "case bandwidth (smooth)");
    band->add_option("--h2", o.h2, "control bandwidth (smooth)");
    output_options(band, o, "band");

    auto* simulate = app.add_subcommand("simulate", "Poisson pattern from an intensity raster");
    simulate->add_option("--intensity", o.intensity, "intensity raster")->required();
    simulate->add_option("--window", o.window, "window JSON");
    simulate->add_option("--seed", o.seed, "seed");
    output_options(simulate, o, "points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Outputs out(o.out_dir, o.name);
        auto chosen = [](CLI::App* parent) { return parent->get_subcommands().front(); };
        if (roc->parsed()) {
            run_roc(leaf[chosen(roc)], o, out);
        } else if (test->parsed()) {
            run_test(leaf[chosen(test)], o, out);
        } else if (rho->parsed()) {
            run_rho(o, out);
        } else if (partial->parsed()) {
            run_partial(leaf[chosen(partial)], o, out);
        } else if (band->parsed()) {
            run_band(o, out);
        } else if (simulate->parsed()) {
            run_simulate(o, out);
        }
        out.commit();
    } catch (const InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
