#include "sproc/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

#include "sproc/distributions.hpp"
#include "sproc/error.hpp"
#include "sproc/model_roc.hpp"
#include "sproc/parallel.hpp"

namespace sproc {

namespace {

double two_sided_p(double z) { return std::min(1.0, 2.0 * dist::normal_upper(std::abs(z))); }

double normal_p(double z, Alternative alt) {
    switch (alt) {
        case Alternative::greater: return dist::normal_upper(z);
        case Alternative::less: return dist::normal_cdf(z);
        case Alternative::two_sided: break;
    }
    return two_sided_p(z);
}

Sidedness sidedness_of(Alternative alt) { return alt == Alternative::two_sided ? Sidedness::two : Sidedness::one; }

double z_of_level(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw InputError("confidence level must lie in (0, 1)");
    }
    return dist::normal_quantile(0.5 + 0.5 * level);
}

StepCdf checked_cdf(const Raster& z, const Window& w) {
    StepCdf f0 = spatial_cdf(z, w);
    if (f0.breaks().size() < 2) {
        throw InputError("covariate is constant over the window; its spatial cdf is degenerate");
    }
    return f0;
}

std::vector<double> covariate_at_points(const PointPattern& pp, const Raster& z) {
    std::vector<double> out;
    out.reserve(pp.size());
    for (const Point& p : pp.points()) {
        const double v = z.at(p);
        if (std::isfinite(v)) out.push_back(v);
    }
    if (out.empty()) {
        throw InputError("no data point has a finite covariate value");
    }
    return out;
}

std::vector<double> grid_or_default(const std::vector<double>& g) { return g.empty() ? uniform_p_grid() : g; }

std::vector<double> eval_on(const RocCurve& c, const std::vector<double>& grid) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = c.eval(grid[i]);
    return v;
}

void check_failures(std::size_t failures, std::size_t nsim) {
    if (5 * failures > nsim) {
        throw NumericalError(std::to_string(failures) + " of " + std::to_string(nsim) +
                             " simulated refits failed (limit 20%)");
    }
}

// Observed curve +- z * SD of the successful simulated curves.
ConfidenceBand sd_band(const std::vector<double>& grid, const std::vector<double>& observed,
                       const std::vector<std::optional<std::vector<double>>>& sims, double level) {
    const double zq = z_of_level(level);
    ConfidenceBand b;
    b.p = grid;
    b.center = observed;
    b.level = level;
    b.method = BandMethod::monte_carlo;
    b.nsim = sims.size();
    std::vector<const std::vector<double>*> ok;
    for (const auto& s : sims) {
        if (s) ok.push_back(&*s);
    }
    b.failures = sims.size() - ok.size();
    check_failures(b.failures, sims.size());
    if (ok.size() < 2) {
        throw NumericalError("fewer than two successful simulations");
    }
    const double m = static_cast<double>(ok.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double mean = 0.0;
        for (const auto* s : ok) mean += (*s)[i];
        mean /= m;
        double ss = 0.0;
        for (const auto* s : ok) ss += ((*s)[i] - mean) * ((*s)[i] - mean);
        const double sd = std::sqrt(ss / (m - 1.0));
        b.lower.push_back(std::clamp(observed[i] - zq * sd, 0.0, 1.0));
        b.upper.push_back(std::clamp(observed[i] + zq * sd, 0.0, 1.0));
    }
    b.flagged.assign(grid.size(), 0);
    return b;
}

}  // namespace

std::string_view to_string(Sidedness s) { return s == Sidedness::one ? "one" : "two"; }

Alternative alternative_from_string(std::string_view s) {
    if (s == "two_sided" || s == "two-sided" || s == "two") return Alternative::two_sided;
    if (s == "greater") return Alternative::greater;
    if (s == "less") return Alternative::less;
    throw InputError("unknown alternative '" + std::string(s) + "'");
}

std::string_view to_string(BandMethod m) {
    switch (m) {
        case BandMethod::binomial_plugin: return "binomial-plugin";
        case BandMethod::smooth_plugin: return "smooth-plugin";
        case BandMethod::monte_carlo: return "monte-carlo";
        case BandMethod::envelope: return "envelope";
    }
    return "binomial-plugin";
}

BandMethod band_method_from_string(std::string_view s) {
    for (BandMethod m : {BandMethod::binomial_plugin, BandMethod::smooth_plugin, BandMethod::monte_carlo,
                         BandMethod::envelope}) {
        if (to_string(m) == s) return m;
    }
    throw InputError("unknown band method '" + std::string(s) + "'");
}

std::vector<double> uniform_p_grid(std::size_t m) {
    if (m < 2) throw InputError("p-grid needs at least two points");
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = static_cast<double>(i) / static_cast<double>(m - 1);
    return g;
}

std::vector<double> pit_values(const PointPattern& pp, const Raster& z, const Window& w) {
    const StepCdf f0 = checked_cdf(z, w);
    std::vector<double> u = covariate_at_points(pp, z);
    for (double& v : u) v = f0.mid(v);
    return u;
}

BermanResult berman_tests(const PointPattern& pp, const Raster& z, const Window& w, Alternative alt) {
    if (pp.empty()) {
        throw InputError("point pattern is empty");
    }
    const std::vector<double> u = pit_values(pp, z, w);
    const std::vector<double> zi = covariate_at_points(pp, z);
    const double n = static_cast<double>(zi.size());

    const CellSample cells = cell_sample(z, w);
    double area = 0.0, int_z = 0.0, int_z2 = 0.0;
    for (std::size_t k = 0; k < cells.value.size(); ++k) {
        area += cells.mass[k];
        int_z += cells.mass[k] * cells.value[k];
        int_z2 += cells.mass[k] * cells.value[k] * cells.value[k];
    }
    const double lambda = n / area;
    const double s = std::accumulate(zi.begin(), zi.end(), 0.0);
    const double mu = lambda * int_z;
    const double sigma = std::sqrt(lambda * int_z2);
    if (!(sigma > 0.0)) {
        throw InputError("covariate integrates to zero square over the window");
    }

    BermanResult r;
    r.z1.method = "Berman Z1";
    r.z1.statistic = (s - mu) / sigma;
    r.z1.p_value = normal_p(r.z1.statistic, alt);
    r.z1.sidedness = sidedness_of(alt);
    r.z1.n = zi.size();

    const double ubar = std::accumulate(u.begin(), u.end(), 0.0) / n;
    r.z2.method = "Berman Z2";
    r.z2.statistic = std::sqrt(12.0 * n) * (ubar - 0.5);
    r.z2.p_value = normal_p(r.z2.statistic, alt);
    r.z2.sidedness = sidedness_of(alt);
    r.z2.n = zi.size();
    return r;
}

CdfTestResult cdf_tests(const PointPattern& pp, const Raster& z, const Window& w) {
    if (pp.empty()) {
        throw InputError("point pattern is empty");
    }
    const StepCdf f0 = checked_cdf(z, w);
    std::vector<double> zi = covariate_at_points(pp, z);
    std::sort(zi.begin(), zi.end());
    const std::size_t n = zi.size();
    const double nd = static_cast<double>(n);

    // sup over the union of jump points of both step functions
    std::vector<double> ts(f0.breaks().begin(), f0.breaks().end());
    ts.insert(ts.end(), zi.begin(), zi.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    double d = 0.0, d_plus = 0.0;
    for (double t : ts) {
        const double fhat = static_cast<double>(std::upper_bound(zi.begin(), zi.end(), t) - zi.begin()) / nd;
        const double diff = f0(t) - fhat;
        d = std::max(d, std::abs(diff));
        d_plus = std::max(d_plus, diff);
    }

    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = f0.mid(zi[i]);
    std::sort(u.begin(), u.end());
    double w2 = 1.0 / (12.0 * nd);
    double a2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double k = static_cast<double>(i) + 1.0;
        const double e = u[i] - (2.0 * k - 1.0) / (2.0 * nd);
        w2 += e * e;
        const double lo = std::clamp(u[i], 1e-300, 1.0);
        const double hi = std::clamp(1.0 - u[n - 1 - i], 1e-300, 1.0);
        a2 += (2.0 * k - 1.0) * (std::log(lo) + std::log(hi));
    }
    a2 = -nd - a2 / nd;

    CdfTestResult r;
    r.ks = {"Kolmogorov-Smirnov", d, dist::ks_pvalue(d, n), Sidedness::two, n};
    r.ks_one_sided = {"Kolmogorov-Smirnov one-sided", d_plus, dist::ks_one_sided_pvalue(d_plus, n), Sidedness::one, n};
    r.cvm = {"Cramer-von Mises", w2, dist::cvm_pvalue(w2, n), Sidedness::one, n};
    r.ad = {"Anderson-Darling", a2, dist::ad_pvalue(a2, n), Sidedness::one, n};
    return r;
}

WilcoxonResult wilcoxon_auc(std::span<const double> cases, std::span<const double> controls, Alternative alt) {
    if (cases.empty() || controls.empty()) {
        throw InputError("Wilcoxon test needs at least one case and one control");
    }
    std::vector<std::pair<double, int>> all;
    all.reserve(cases.size() + controls.size());
    for (double v : cases) all.push_back({v, 1});
    for (double v : controls) all.push_back({v, 0});
    for (const auto& a : all) {
        if (!std::isfinite(a.first)) throw InputError("Wilcoxon test needs finite scores");
    }
    std::sort(all.begin(), all.end());
    const double n1 = static_cast<double>(cases.size());
    const double n0 = static_cast<double>(controls.size());
    const double nn = n1 + n0;
    double r1 = 0.0, ties = 0.0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        const double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        const double t = static_cast<double>(j - i);
        ties += t * t * t - t;
        for (std::size_t k = i; k < j; ++k) {
            if (all[k].second == 1) r1 += mid;
        }
        i = j;
    }
    const double u1 = r1 - n1 * (n1 + 1.0) / 2.0;
    const double mean = n1 * n0 / 2.0;
    const double var = n1 * n0 / 12.0 * ((nn + 1.0) - ties / (nn * (nn - 1.0)));

    WilcoxonResult r;
    r.auc = u1 / (n1 * n0);
    r.test.method = "Wilcoxon rank sum";
    r.test.statistic = u1;
    r.test.sidedness = sidedness_of(alt);
    r.test.n = cases.size() + controls.size();
    if (!(var > 0.0)) {
        r.test.p_value = 1.0;
        return r;
    }
    const double diff = u1 - mean;
    double cc = 0.5;
    if (alt == Alternative::less) cc = -0.5;
    if (alt == Alternative::two_sided) cc = diff > 0 ? 0.5 : (diff < 0 ? -0.5 : 0.0);
    r.test.p_value = normal_p((diff - cc) / std::sqrt(var), alt);
    return r;
}

ConfidenceBand band_binomial(const RocCurve& curve, std::size_t n, double level, std::vector<double> p_grid) {
    if (n == 0) {
        throw InputError("binomial band needs n >= 1");
    }
    const double zq = z_of_level(level);
    ConfidenceBand b;
    b.p = grid_or_default(p_grid);
    b.level = level;
    b.method = BandMethod::binomial_plugin;
    b.center = eval_on(curve, b.p);
    for (double r : b.center) {
        const double half = zq * std::sqrt(r * (1.0 - r) / static_cast<double>(n));
        b.lower.push_back(std::clamp(r - half, 0.0, 1.0));
        b.upper.push_back(std::clamp(r + half, 0.0, 1.0));
    }
    b.flagged.assign(b.p.size(), 0);
    return b;
}

ConfidenceBand band_monte_carlo(const PoissonPPModel& model, std::span<const Raster> covariates,
                                const PointPattern& pp, const SimulationOptions& opt) {
    if (opt.nsim < 2) throw InputError("Monte-Carlo band needs nsim >= 2");
    z_of_level(opt.level);
    const std::vector<double> grid = grid_or_default(opt.p_grid);
    const std::vector<double> observed = eval_on(roc_model_pp(model.fitted, pp), grid);
    std::vector<std::optional<std::vector<double>>> sims(opt.nsim);
    parallel_for(opt.nsim, opt.threads, [&](std::size_t s) {
        try {
            const PointPattern sim = simulate_poisson(model.fitted, pp.window(), split_seed(opt.seed, s));
            const PoissonPPModel fit =
                fit_poisson_loglinear(sim, covariates, model.covariate_names, model.control, &model.quadrature_grid);
            if (!fit.convergence.converged) return;
            sims[s] = eval_on(roc_model_pp(fit.fitted, sim), grid);
        } catch (const InputError&) {
        } catch (const NumericalError&) {
        }
    });
    return sd_band(grid, observed, sims, opt.level);
}

ConfidenceBand band_monte_carlo(const LogisticModel& model, std::span<const Raster> covariates,
                                const PresenceGrid& grid, const SimulationOptions& opt) {
    if (opt.nsim < 2) throw InputError("Monte-Carlo band needs nsim >= 2");
    if (!model.fitted || !(model.fitted->grid() == grid.grid())) {
        throw InputError("logistic model was not fitted to this presence grid");
    }
    z_of_level(opt.level);
    const std::vector<double> pg = grid_or_default(opt.p_grid);
    const std::vector<double> observed = eval_on(roc_model_grid(*model.fitted, grid), pg);
    const ProbabilityGrid& pi = *model.fitted;
    std::vector<std::optional<std::vector<double>>> sims(opt.nsim);
    parallel_for(opt.nsim, opt.threads, [&](std::size_t s) {
        std::mt19937_64 rng(split_seed(opt.seed, s));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<Presence> status(grid.size(), Presence::unknown);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (grid[j] == Presence::unknown || !std::isfinite(pi[j])) continue;
            status[j] = unif(rng) < pi[j] ? Presence::present : Presence::absent;
        }
        try {
            const PresenceGrid sim(grid.grid(), std::move(status), grid.weights());
            const LogisticModel fit = fit_logistic(sim, covariates, model.covariate_names, model.control);
            if (!fit.convergence.converged || fit.separation) return;
            sims[s] = eval_on(roc_model_grid(*fit.fitted, sim), pg);
        } catch (const InputError&) {
        } catch (const NumericalError&) {
        }
    });
    return sd_band(pg, observed, sims, opt.level);
}

ConfidenceBand envelope(const Raster& intensity, const Raster& z, const Window& w, const EnvelopeOptions& opt) {
    if (opt.nsim < 2) throw InputError("envelope needs nsim >= 2");
    if (opt.rank < 1) throw InputError("envelope rank must be >= 1");
    const std::vector<double> grid = grid_or_default(opt.p_grid);
    std::vector<std::optional<std::vector<double>>> sims(opt.nsim);
    parallel_for(opt.nsim, opt.threads, [&](std::size_t s) {
        try {
            const PointPattern sim = simulate_poisson(intensity, w, split_seed(opt.seed, s));
            if (sim.empty()) return;
            sims[s] = eval_on(roc_covariate_pp(sim, z, opt.direction, nullptr, false), grid);
        } catch (const InputError&) {
        }
    });
    ConfidenceBand b;
    b.p = grid;
    b.level = opt.level;
    b.method = BandMethod::envelope;
    b.nsim = opt.nsim;
    std::vector<const std::vector<double>*> ok;
    for (const auto& s : sims) {
        if (s) ok.push_back(&*s);
    }
    b.failures = opt.nsim - ok.size();
    check_failures(b.failures, opt.nsim);
    if (opt.rank > ok.size()) {
        throw InputError("envelope rank exceeds the number of successful simulations");
    }
    std::vector<double> col(ok.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t k = 0; k < ok.size(); ++k) col[k] = (*ok[k])[i];
        std::sort(col.begin(), col.end());
        b.lower.push_back(col[opt.rank - 1]);
        b.upper.push_back(col[col.size() - opt.rank]);
        b.center.push_back(std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size()));
    }
    b.flagged.assign(grid.size(), 0);
    return b;
}

ConfidenceBand envelope(const PoissonPPModel& model, const Raster& z, const Window& w, const EnvelopeOptions& opt) {
    return envelope(model.fitted, z, w, opt);
}

double band_inclusion(const ConfidenceBand& band, const RocCurve& curve) {
    if (band.p.empty()) return 0.0;
    std::size_t inside = 0;
    for (std::size_t i = 0; i < band.p.size(); ++i) {
        const double r = curve.eval(band.p[i]);
        if (r >= band.lower[i] - 1e-12 && r <= band.upper[i] + 1e-12) ++inside;
    }
    return static_cast<double>(inside) / static_cast<double>(band.p.size());
}

}  // namespace sproc
