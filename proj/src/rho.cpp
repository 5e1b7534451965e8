#include "sproc/rho.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "sproc/error.hpp"
#include "sproc/smoothing.hpp"

namespace sproc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDensityFloor = 1e-12;

// Distinct covariate values of the window cells with their total area.
struct ValueMass {
    std::vector<double> value;
    std::vector<double> mass;
    double total = 0.0;
};

ValueMass distinct_cells(const Raster& z, const Window& w) {
    const CellSample cs = cell_sample(z, w);
    std::map<double, double> acc;
    for (std::size_t k = 0; k < cs.value.size(); ++k) acc[cs.value[k]] += cs.mass[k];
    ValueMass out;
    for (const auto& [v, m] : acc) {
        out.value.push_back(v);
        out.mass.push_back(m);
        out.total += m;
    }
    if (out.value.size() < 2) {
        throw InputError("covariate is constant over the window; its spatial cdf is degenerate");
    }
    return out;
}

std::vector<double> values_at_points(const PointPattern& pp, const Raster& z) {
    if (pp.empty()) throw InputError("point pattern is empty");
    std::vector<double> out;
    for (const Point& p : pp.points()) {
        const double v = z.at(p);
        if (std::isfinite(v)) out.push_back(v);
    }
    if (out.empty()) throw InputError("no data point has a finite covariate value");
    return out;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    g.back() = b;
    return g;
}

double lambda_total(const RhoEstimate& r, const ValueMass& cells) {
    double s = 0.0;
    for (std::size_t k = 0; k < cells.value.size(); ++k) s += cells.mass[k] * r.at(cells.value[k]);
    return s;
}

}  // namespace

std::string_view to_string(RhoMethod m) {
    switch (m) {
        case RhoMethod::kernel: return "kernel";
        case RhoMethod::isotonic: return "isotonic";
        case RhoMethod::parametric_loglinear: return "parametric-loglinear";
        case RhoMethod::from_roc: return "from-roc";
    }
    return "kernel";
}

RhoMethod rho_method_from_string(std::string_view s) {
    for (RhoMethod m : {RhoMethod::kernel, RhoMethod::isotonic, RhoMethod::parametric_loglinear, RhoMethod::from_roc}) {
        if (to_string(m) == s) return m;
    }
    if (s == "loglinear") return RhoMethod::parametric_loglinear;
    throw InputError("unknown rho method '" + std::string(s) + "'");
}

double RhoEstimate::at(double v) const {
    if (z.empty()) return 0.0;
    auto clean = [](double x) { return std::isnan(x) ? 0.0 : x; };
    if (v <= z.front()) return clean(rho.front());
    if (v >= z.back()) return clean(rho.back());
    const auto it = std::upper_bound(z.begin(), z.end(), v);
    const std::size_t j = static_cast<std::size_t>(it - z.begin());
    const double a = clean(rho[j - 1]);
    const double b = clean(rho[j]);
    const double f = (v - z[j - 1]) / (z[j] - z[j - 1]);
    return a + f * (b - a);
}

RhoEstimate estimate_rho_kernel(const PointPattern& pp, const Raster& z, const Window& w,
                                std::optional<double> bandwidth, std::size_t grid_points) {
    const std::vector<double> zi = values_at_points(pp, z);
    const ValueMass cells = distinct_cells(z, w);
    if (grid_points < 2) throw InputError("z-grid needs at least two points");
    double h = 0.0;
    if (bandwidth && *bandwidth > 0.0) {
        h = *bandwidth;
    } else {
        h = silverman_bandwidth(zi);
    }
    const double a = cells.value.front();
    const double b = cells.value.back();
    const double norm = 1.0 / (h * std::sqrt(2.0 * std::numbers::pi));
    // Gaussian kernel reflected at both ends of the observed range
    auto reflected = [&](double t, double x) {
        auto k = [&](double u) { return std::exp(-0.5 * u * u); };
        return norm * (k((t - x) / h) + k((t - (2.0 * a - x)) / h) + k((t - (2.0 * b - x)) / h));
    };

    RhoEstimate r;
    r.method = RhoMethod::kernel;
    r.bandwidth = h;
    r.z = linspace(a, b, grid_points);
    r.kappa = static_cast<double>(zi.size()) / cells.total;
    for (double t : r.z) {
        double num = 0.0;
        for (double x : zi) num += reflected(t, x);
        double den = 0.0;
        for (std::size_t k = 0; k < cells.value.size(); ++k) den += cells.mass[k] * reflected(t, cells.value[k]);
        r.rho.push_back(den / cells.total < kDensityFloor ? kNaN : num / den);
    }
    r.lambda_total = lambda_total(r, cells);
    return r;
}

std::vector<double> pava(const std::vector<double>& y, const std::vector<double>& w) {
    if (y.size() != w.size()) throw InputError("pava: values and weights differ in length");
    struct Block {
        double value, weight;
        std::size_t len;
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < y.size(); ++i) {
        blocks.push_back({y[i], w[i], 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].value > blocks.back().value) {
            Block top = blocks.back();
            blocks.pop_back();
            Block& prev = blocks.back();
            const double wt = prev.weight + top.weight;
            prev.value = wt > 0.0 ? (prev.value * prev.weight + top.value * top.weight) / wt
                                  : 0.5 * (prev.value + top.value);
            prev.weight = wt;
            prev.len += top.len;
        }
    }
    std::vector<double> out;
    out.reserve(y.size());
    for (const Block& b : blocks) out.insert(out.end(), b.len, b.value);
    return out;
}

RhoEstimate estimate_rho_isotonic(const PointPattern& pp, const Raster& z, const Window& w, Direction direction) {
    if (pp.empty()) throw InputError("point pattern is empty");
    const CellSample cs = cell_sample(z, w);
    std::map<double, std::pair<double, double>> blocks;  // value -> (count, area)
    std::vector<std::ptrdiff_t> block_of_cell(z.grid().size(), -1);
    for (std::size_t k = 0; k < cs.value.size(); ++k) {
        blocks[cs.value[k]].second += cs.mass[k];
        block_of_cell[cs.index[k]] = 1;
    }
    if (blocks.size() < 2) {
        throw InputError("covariate is constant over the window; its spatial cdf is degenerate");
    }
    double used = 0.0;
    for (const Point& p : pp.points()) {
        const auto cell = z.grid().cell_of(p);
        if (!cell || block_of_cell[*cell] < 0) continue;
        blocks[z[*cell]].first += 1.0;
        used += 1.0;
    }
    if (used == 0.0) throw InputError("no data point falls in a window cell with a finite covariate");

    RhoEstimate r;
    r.method = RhoMethod::isotonic;
    std::vector<double> rate, area;
    double total = 0.0;
    for (const auto& [v, ca] : blocks) {
        r.z.push_back(v);
        rate.push_back(ca.first / ca.second);
        area.push_back(ca.second);
        total += ca.second;
    }
    if (direction == Direction::high) {
        r.rho = pava(rate, area);
    } else {
        // nonincreasing fit = nondecreasing fit of the reversed sequence
        std::vector<double> rr(rate.rbegin(), rate.rend()), ra(area.rbegin(), area.rend());
        r.rho = pava(rr, ra);
        std::reverse(r.rho.begin(), r.rho.end());
    }
    r.kappa = used / total;
    for (std::size_t k = 0; k < r.z.size(); ++k) r.lambda_total += r.rho[k] * area[k];
    return r;
}

RhoEstimate estimate_rho_loglinear(const PointPattern& pp, const Raster& z, const Window& w,
                                   std::size_t grid_points) {
    const ValueMass cells = distinct_cells(z, w);
    const std::vector<double> zi = values_at_points(pp, z);
    const std::vector<Raster> covs{z};
    const PoissonPPModel m = fit_poisson_loglinear(pp, covs);
    RhoEstimate r;
    r.method = RhoMethod::parametric_loglinear;
    r.z = linspace(cells.value.front(), cells.value.back(), grid_points);
    for (double t : r.z) r.rho.push_back(std::exp(m.coefficients[0] + m.coefficients[1] * t));
    r.kappa = static_cast<double>(zi.size()) / cells.total;
    r.lambda_total = lambda_total(r, cells);
    return r;
}

RocCurve roc_from_rho(const RhoEstimate& rho, const StepCdf& f0, double kappa, Direction direction,
                      std::vector<std::string>* warnings) {
    if (!(kappa > 0.0)) throw InputError("mean intensity kappa must be positive");
    for (double v : rho.rho) {
        if (v < 0.0) throw InputError("rho must be nonnegative");
    }
    std::vector<double> grid = linspace(0.0, 1.0, 512);
    for (double c : f0.cumulative()) grid.push_back(direction == Direction::high ? 1.0 - c : c);
    for (double& g : grid) g = std::clamp(g, 0.0, 1.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<RocKnot> knots{{0.0, 0.0, kNaN}};
    double r = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double mid = 0.5 * (grid[i - 1] + grid[i]);
        const double t = f0.quantile(direction == Direction::high ? 1.0 - mid : mid);
        r += rho.at(t) * (grid[i] - grid[i - 1]) / kappa;
        knots.push_back({grid[i], r, t});
    }
    if (!(r > 0.0)) throw NumericalError("rho integrates to zero over the window");
    if (std::abs(r - 1.0) > 0.01 && warnings) {
        warnings->push_back("rho integrates to " + std::to_string(r) +
                            " times kappa; rho and kappa look inconsistent (curve renormalised)");
    }
    for (auto& k : knots) k.r /= r;
    knots.back().r = 1.0;
    return RocCurve(std::move(knots), direction, FpConvention::area, Provenance::theoretical);
}

RhoEstimate rho_from_roc(const RocCurve& curve, const StepCdf& f0, double kappa, double area) {
    if (curve.provenance() == Provenance::empirical) {
        throw InputError("empirical ROC curves are step functions; smooth the curve first");
    }
    if (!(kappa > 0.0)) throw InputError("mean intensity kappa must be positive");
    const auto k = curve.knots();
    std::map<double, std::pair<double, double>> acc;  // z -> (slope * dp, dp)
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double dp = k[i].p - k[i - 1].p;
        const double dr = k[i].r - k[i - 1].r;
        if (dp <= 0.0) {
            if (dr > 0.0) throw InputError("ROC curve has a vertical jump; smooth the curve first");
            continue;
        }
        // slope of the segment = central difference about its midpoint
        const double mid = 0.5 * (k[i].p + k[i - 1].p);
        const double t = f0.quantile(curve.direction() == Direction::high ? 1.0 - mid : mid);
        acc[t].first += dr;
        acc[t].second += dp;
    }
    RhoEstimate r;
    r.method = RhoMethod::from_roc;
    r.kappa = kappa;
    for (const auto& [t, sd] : acc) {
        r.z.push_back(t);
        r.rho.push_back(kappa * sd.first / sd.second);
    }
    r.lambda_total = kappa * area;
    return r;
}

std::vector<double> boyce_index(const RhoEstimate& rho) {
    if (!(rho.lambda_total > 0.0)) throw InputError("rho estimate has zero total");
    std::vector<double> out;
    for (double v : rho.rho) out.push_back(v / rho.lambda_total);
    return out;
}

}  // namespace sproc
