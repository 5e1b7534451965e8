#include "sproc/model_roc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "sproc/error.hpp"

namespace sproc {

namespace {

// Union of knot abscissae of several curves.
std::vector<double> knot_union(std::initializer_list<const RocCurve*> curves) {
    std::vector<double> p;
    for (const RocCurve* c : curves) {
        for (const auto& k : c->knots()) p.push_back(k.p);
    }
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    return p;
}

}  // namespace

RocCurve roc_model_grid(const ProbabilityGrid& fitted, const PresenceGrid& grid, FpConvention fp) {
    return roc_covariate_grid(grid, fitted.as_raster(), Direction::high, fp);
}

RocCurve roc_model_grid(const LogisticModel& model, const PresenceGrid& grid, bool loo, FpConvention fp,
                        unsigned threads) {
    if (!model.fitted || !(model.fitted->grid() == grid.grid())) {
        throw InputError("logistic model was not fitted to this presence grid");
    }
    const std::vector<double> score = loo ? loo_fitted_all(model, threads) : model.fitted_rows();
    std::vector<ScoredMass> pos;
    std::vector<ScoredMass> neg;
    std::size_t used = 0;
    for (std::size_t r = 0; r < score.size(); ++r) {
        const std::size_t j = model.row_source[r];
        if (grid[j] == Presence::unknown) continue;
        ++used;
        if (grid[j] == Presence::present) pos.push_back({score[r], 1.0});
        if (grid[j] == Presence::absent || fp != FpConvention::absence) neg.push_back({score[r], grid.weight(j)});
    }
    RocCurve c = roc_from_masses(pos, neg, Direction::high, fp, Provenance::empirical);
    c.excluded = grid.size() - grid.count(Presence::unknown) - used;
    return c;
}

RocCurve roc_model_pp(const Raster& intensity, const PointPattern& pp) {
    return roc_covariate_pp(pp, intensity, Direction::high, nullptr, false);
}

RocCurve roc_model_pp(const PoissonPPModel& model, const PointPattern& pp, bool loo, unsigned threads) {
    if (pp.empty()) {
        throw InputError("point pattern is empty");
    }
    if (!loo) {
        return roc_model_pp(model.fitted, pp);
    }
    if (model.point_row.size() != pp.size()) {
        throw InputError("leave-one-out M-ROC needs the pattern the model was fitted to");
    }
    const std::vector<double> score = loo_fitted_all(model, threads);
    std::vector<ScoredMass> pos;
    std::size_t excluded = 0;
    for (double s : score) {
        if (std::isfinite(s)) {
            pos.push_back({s, 1.0});
        } else {
            ++excluded;
        }
    }
    const CellSample cells = cell_sample(model.fitted, pp.window());
    std::vector<ScoredMass> neg(cells.value.size());
    for (std::size_t k = 0; k < neg.size(); ++k) neg[k] = {cells.value[k], cells.mass[k]};
    if (pos.empty()) {
        throw InputError("no data point has a finite fitted intensity");
    }
    RocCurve c = roc_from_masses(pos, neg, Direction::high, FpConvention::area, Provenance::empirical);
    c.excluded = excluded + cells.missing;
    return c;
}

RocCurve roc_theoretical(const TheoreticalRocInput& in) {
    const GridSpec& g = in.score.grid();
    const double a = g.cell_area();
    std::vector<ScoredMass> pos;
    std::vector<ScoredMass> neg;
    std::size_t missing = 0;
    double total = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const Point c = g.center(j);
        if (!in.window.contains(c)) continue;
        const double s = in.score[j];
        const double lam = in.intensity.grid() == g ? in.intensity[j] : in.intensity.at(c);
        double b = 1.0;
        if (in.baseline) b = in.baseline->grid() == g ? (*in.baseline)[j] : in.baseline->at(c);
        if (!std::isfinite(s) || !std::isfinite(lam) || !std::isfinite(b)) {
            ++missing;
            continue;
        }
        if (lam < 0.0 || b < 0.0) {
            throw InputError("intensity and baseline must be nonnegative");
        }
        total += lam;
        if (in.fp == FpConvention::absence) {
            if (lam > 1.0) {
                throw InputError("absence FP weights need presence probabilities in [0, 1]");
            }
            pos.push_back({s, lam});
            neg.push_back({s, 1.0 - lam});
        } else {
            pos.push_back({s, lam * a});
            neg.push_back({s, b * a});
        }
    }
    if (!(total > 0.0)) {
        throw InputError("intensity has zero total inside the window");
    }
    RocCurve c = roc_from_masses(pos, neg, in.direction, in.fp, in.provenance);
    c.excluded = missing;
    return c;
}

RocCurve roc_theoretical(const Raster& score, const Raster& intensity, const Window& w, Direction direction) {
    return roc_theoretical(TheoreticalRocInput{score, intensity, w, std::nullopt, direction});
}

RocCurve roc_theoretical(const ProbabilityGrid& pi, Provenance provenance) {
    std::vector<ScoredMass> pos;
    std::vector<ScoredMass> neg;
    for (std::size_t j = 0; j < pi.size(); ++j) {
        if (std::isnan(pi[j])) continue;
        pos.push_back({pi[j], pi[j]});
        neg.push_back({pi[j], 1.0 - pi[j]});
    }
    return roc_from_masses(pos, neg, Direction::high, FpConvention::absence, provenance);
}

RocCurve roc_model_predicted(const PoissonPPModel& model, const Window& w) {
    return roc_theoretical(TheoreticalRocInput{model.fitted, model.fitted, w, std::nullopt, Direction::high,
                                               FpConvention::area, Provenance::model_predicted});
}

RocCurve roc_model_predicted(const LogisticModel& model) {
    std::vector<ScoredMass> pos;
    std::vector<ScoredMass> neg;
    for (double p : model.fitted_rows()) {
        pos.push_back({p, p});
        neg.push_back({p, 1.0 - p});
    }
    return roc_from_masses(pos, neg, Direction::high, FpConvention::absence, Provenance::model_predicted);
}

// ---------------------------------------------------------------- structural checks

CurveReport check_dominance(const Raster& score, const Raster& intensity, const Window& w) {
    const RocCurve rs = roc_theoretical(score, intensity, w);
    const RocCurve rl = roc_theoretical(intensity, intensity, w);
    CurveReport rep;
    rep.name = "dominance";
    rep.p_grid = knot_union({&rs, &rl});
    double worst = 0.0;
    for (double p : rep.p_grid) {
        // compare both one-sided limits so vertical segments are covered
        const double lo = rl.eval(p) - rs.eval(p);
        const double hi = rl.eval_right(p) - rs.eval_right(p);
        rep.values.push_back(std::min(lo, hi));
        worst = std::max(worst, -std::min(lo, hi));
    }
    rep.max_violation = worst;
    rep.classification = worst <= 1e-9 ? "dominates" : "violated";
    return rep;
}

std::vector<std::pair<double, double>> lorenz_curve(const Raster& intensity, const Window& w) {
    const CellSample s = cell_sample(intensity, w);
    std::vector<std::size_t> order(s.value.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.value[a] < s.value[b]; });
    double area = 0.0;
    double mass = 0.0;
    for (std::size_t k : order) {
        if (s.value[k] < 0.0) throw InputError("intensity must be nonnegative");
        area += s.mass[k];
        mass += s.mass[k] * s.value[k];
    }
    if (!(mass > 0.0)) {
        throw InputError("intensity has zero total inside the window");
    }
    std::vector<std::pair<double, double>> out{{0.0, 0.0}};
    double ca = 0.0;
    double cm = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const std::size_t k = order[i];
        ca += s.mass[k];
        cm += s.mass[k] * s.value[k];
        // one knot per distinct value; the curve is linear across a tie
        if (i + 1 < order.size() && s.value[order[i + 1]] == s.value[k]) continue;
        out.push_back({ca / area, cm / mass});
    }
    out.back() = {1.0, 1.0};
    return out;
}

CurveReport lorenz_equivalence(const Raster& intensity, const Window& w) {
    const RocCurve r = roc_theoretical(intensity, intensity, w);
    const auto L = lorenz_curve(intensity, w);
    auto lorenz_at = [&](double q) {
        auto it = std::lower_bound(L.begin(), L.end(), q, [](const auto& k, double v) { return k.first < v; });
        if (it == L.begin()) return it->second;
        if (it == L.end()) return 1.0;
        const auto& a = *(it - 1);
        const auto& b = *it;
        return b.first == a.first ? b.second : a.second + (b.second - a.second) * (q - a.first) / (b.first - a.first);
    };
    CurveReport rep;
    rep.name = "lorenz";
    std::set<double> grid;
    for (const auto& k : r.knots()) grid.insert(k.p);
    for (const auto& k : L) grid.insert(1.0 - k.first);
    rep.p_grid.assign(grid.begin(), grid.end());
    double worst = 0.0;
    for (double p : rep.p_grid) {
        const double d = r.eval(p) - (1.0 - lorenz_at(1.0 - p));
        rep.values.push_back(d);
        worst = std::max(worst, std::abs(d));
    }
    rep.max_violation = worst;
    rep.classification = worst <= 1e-12 ? "equal" : "different";
    return rep;
}

double ConcavityReport::max_violation() const {
    if (classification == "concave") return concavity_violation;
    if (classification == "convex") return convexity_violation;
    return std::min(concavity_violation, convexity_violation);
}

ConcavityReport check_concavity(const RocCurve& c, double tol) {
    // distinct consecutive edge vectors
    std::vector<std::pair<double, double>> edges;
    const auto k = c.knots();
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double dp = k[i].p - k[i - 1].p;
        const double dr = k[i].r - k[i - 1].r;
        if (dp != 0.0 || dr != 0.0) edges.push_back({dp, dr});
    }
    ConcavityReport rep;
    for (std::size_t i = 1; i < edges.size(); ++i) {
        const auto [p1, r1] = edges[i - 1];
        const auto [p2, r2] = edges[i];
        // signed distance of the shared knot above the chord joining its
        // neighbours: positive where the polyline bends down (concave)
        const double cross = p1 * r2 - r1 * p2;
        const double dev = -cross / std::hypot(p1 + p2, r1 + r2);
        rep.concavity_violation = std::max(rep.concavity_violation, -dev);
        rep.convexity_violation = std::max(rep.convexity_violation, dev);
    }
    rep.concave = rep.concavity_violation <= tol;
    rep.convex = rep.convexity_violation <= tol;
    rep.classification = rep.concave ? "concave" : (rep.convex ? "convex" : "neither");
    return rep;
}

}  // namespace sproc
