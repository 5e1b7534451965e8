#include "sproc/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sproc/error.hpp"
#include "sproc/parallel.hpp"

namespace sproc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t covariate_index(const std::vector<std::string>& names, const std::string& drop) {
    const auto it = std::find(names.begin(), names.end(), drop);
    if (it == names.end()) {
        throw InputError("model has no covariate named '" + drop + "'");
    }
    return static_cast<std::size_t>(it - names.begin());
}

template <typename T>
std::vector<T> without(std::span<const T> v, std::size_t k) {
    std::vector<T> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i != k) out.push_back(v[i]);
    }
    return out;
}

PartialRoc make_partial(std::string name, RocCurve c) {
    const double a = auc(c);
    return PartialRoc{std::move(name), std::move(c), a};
}

}  // namespace

RocCurve roc_restricted(const PointPattern& pp, const Raster& z, const Window& b, Direction direction,
                        const Raster* baseline) {
    const PointPattern sub = restrict(pp, b);
    if (sub.empty()) {
        throw InputError("restriction leaves no data points");
    }
    return roc_covariate_pp(sub, z, direction, baseline);
}

RocCurve roc_restricted(const PresenceGrid& grid, const Raster& z, const Window& b, Direction direction,
                        FpConvention fp) {
    return roc_covariate_grid(restrict(grid, b), z, direction, fp);
}

std::vector<double> horvitz_thompson_weights(std::span<const double> q) {
    std::vector<double> w;
    w.reserve(q.size());
    for (double v : q) {
        if (!(v > 0.0 && v <= 1.0)) {
            throw InputError("detection probabilities must lie in (0, 1]");
        }
        w.push_back(1.0 / v);
    }
    return w;
}

RocCurve roc_horvitz_thompson(const PointPattern& pp, std::span<const double> q, const Raster& z,
                              Direction direction) {
    if (q.size() != pp.size()) {
        throw InputError("need one detection probability per data point");
    }
    return roc_covariate_pp(pp.with_weights(horvitz_thompson_weights(q)), z, direction);
}

PartialRoc partial_roc_drop(const PoissonPPModel& model, std::span<const Raster> covariates, const PointPattern& pp,
                            const std::string& drop, Direction direction) {
    if (covariates.size() != model.covariate_names.size()) {
        throw InputError("covariate rasters do not match the model");
    }
    const std::size_t k = covariate_index(model.covariate_names, drop);
    const std::vector<Raster> rest = without(covariates, k);
    const std::vector<std::string> names = without(std::span<const std::string>(model.covariate_names), k);
    PoissonPPModel reduced;
    try {
        reduced = fit_poisson_loglinear(pp, rest, names, model.control, &model.quadrature_grid);
    } catch (const std::runtime_error& e) {
        throw NumericalError("refit without '" + drop + "' failed: " + e.what());
    }
    if (!reduced.convergence.converged) {
        throw NumericalError("refit without '" + drop + "' did not converge");
    }
    return make_partial(drop, roc_covariate_pp(pp, covariates[k], direction, &reduced.fitted));
}

PartialRoc partial_roc_drop(const LogisticModel& model, std::span<const Raster> covariates, const PresenceGrid& grid,
                            const std::string& drop, Direction direction, FpConvention fp) {
    if (covariates.size() != model.covariate_names.size()) {
        throw InputError("covariate rasters do not match the model");
    }
    const std::size_t k = covariate_index(model.covariate_names, drop);
    const std::vector<Raster> rest = without(covariates, k);
    const std::vector<std::string> names = without(std::span<const std::string>(model.covariate_names), k);
    LogisticModel reduced;
    try {
        reduced = fit_logistic(grid, rest, names, model.control);
    } catch (const std::runtime_error& e) {
        throw NumericalError("refit without '" + drop + "' failed: " + e.what());
    }
    if (!reduced.convergence.converged) {
        throw NumericalError("refit without '" + drop + "' did not converge");
    }
    const Raster baseline = reduced.fitted->as_raster();
    return make_partial(drop, roc_covariate_grid(grid, covariates[k], direction, fp, &baseline));
}

PartialRoc partial_roc_add(const PoissonPPModel& model, const Raster& candidate, const PointPattern& pp,
                           const std::string& name, Direction direction) {
    return make_partial(name, roc_covariate_pp(pp, candidate, direction, &model.fitted));
}

PartialRoc partial_roc_add(const LogisticModel& model, const Raster& candidate, const PresenceGrid& grid,
                           const std::string& name, Direction direction, FpConvention fp) {
    if (!model.fitted) {
        throw InputError("partial ROC needs a gridded logistic fit");
    }
    const Raster baseline = model.fitted->as_raster();
    return make_partial(name, roc_covariate_grid(grid, candidate, direction, fp, &baseline));
}

RocCurve reconstruct_partition(const RocCurve& r1, const RocCurve& r2, double n1, double n2, double a1, double a2,
                               const StepCdf& f1, const StepCdf& f2) {
    if (!(n1 >= 0.0 && n2 >= 0.0) || !(n1 + n2 > 0.0)) {
        throw InputError("reconstruction needs a positive total point count");
    }
    if (!(a1 >= 0.0 && a2 >= 0.0) || !(a1 + a2 > 0.0)) {
        throw InputError("reconstruction needs a positive total area");
    }
    if (r1.direction() != r2.direction()) {
        throw InputError("subregion curves must share a direction");
    }
    for (const StepCdf* f : {&f1, &f2}) {
        if (!f->cumulative().empty() && std::abs(f->cumulative().back() - 1.0) > 1e-9) {
            throw InputError("subregion cdfs must end at 1");
        }
    }
    const bool high = r1.direction() == Direction::high;
    const RocCurve l1 = high ? reverse(r1) : r1;
    const RocCurve l2 = high ? reverse(r2) : r2;

    // pooled breaks
    std::vector<double> t(f1.breaks().begin(), f1.breaks().end());
    t.insert(t.end(), f2.breaks().begin(), f2.breaks().end());
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());

    const double wa1 = a1 / (a1 + a2), wa2 = a2 / (a1 + a2);
    const double wn1 = n1 / (n1 + n2), wn2 = n2 / (n1 + n2);
    std::vector<RocKnot> knots{{0.0, 0.0, kNaN}};
    for (double tk : t) {
        // at the pooled knot F(t_k) the position inside the jump is 1, so
        // each subregion is read at F_i(t_k)
        const double p1 = f1.breaks().empty() ? 0.0 : f1(tk);
        const double p2 = f2.breaks().empty() ? 0.0 : f2(tk);
        const double p = wa1 * p1 + wa2 * p2;
        const double r = (n1 > 0.0 ? wn1 * l1.eval(p1) : 0.0) + (n2 > 0.0 ? wn2 * l2.eval(p2) : 0.0);
        knots.push_back({p, r, tk});
    }
    knots.back().p = 1.0;
    knots.back().r = 1.0;
    RocCurve low(std::move(knots), Direction::low, r1.fp_convention(), r1.provenance());
    return high ? reverse(low) : low;
}

RocComparison compare_roc(const RocCurve& empirical, const RocCurve& predicted, const ConfidenceBand* band) {
    RocComparison out;
    for (const RocCurve* c : {&empirical, &predicted}) {
        for (const auto& k : c->knots()) out.p.push_back(k.p);
    }
    std::sort(out.p.begin(), out.p.end());
    out.p.erase(std::unique(out.p.begin(), out.p.end()), out.p.end());
    for (double p : out.p) {
        const double left = empirical.eval(p) - predicted.eval(p);
        const double right = empirical.eval_right(p) - predicted.eval_right(p);
        out.gap.push_back(left);
        out.max_gap = std::max({out.max_gap, std::abs(left), std::abs(right)});
    }
    if (band) out.inside_band = band_inclusion(*band, empirical);
    return out;
}

}  // namespace sproc
