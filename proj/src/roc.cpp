#include "sproc/roc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sproc/error.hpp"

namespace sproc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Tagged {
    double score;
    double mass;
    bool positive;
};

}  // namespace

std::string_view to_string(Direction d) { return d == Direction::high ? "high" : "low"; }

std::string_view to_string(FpConvention c) {
    switch (c) {
        case FpConvention::absence: return "absence";
        case FpConvention::all_pixels: return "all_pixels";
        case FpConvention::area: return "area";
    }
    return "area";
}

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::empirical: return "empirical";
        case Provenance::theoretical: return "theoretical";
        case Provenance::model_predicted: return "model_predicted";
        case Provenance::smoothed: return "smoothed";
    }
    return "empirical";
}

Direction direction_from_string(std::string_view s) {
    if (s == "high") return Direction::high;
    if (s == "low") return Direction::low;
    throw InputError("unknown direction '" + std::string(s) + "' (expected high or low)");
}

FpConvention fp_convention_from_string(std::string_view s) {
    if (s == "absence") return FpConvention::absence;
    if (s == "all_pixels" || s == "all") return FpConvention::all_pixels;
    if (s == "area") return FpConvention::area;
    throw InputError("unknown fp convention '" + std::string(s) + "'");
}

Provenance provenance_from_string(std::string_view s) {
    if (s == "empirical") return Provenance::empirical;
    if (s == "theoretical") return Provenance::theoretical;
    if (s == "model_predicted") return Provenance::model_predicted;
    if (s == "smoothed") return Provenance::smoothed;
    throw InputError("unknown provenance '" + std::string(s) + "'");
}

// ---------------------------------------------------------------- RocCurve

RocCurve::RocCurve(std::vector<RocKnot> knots, Direction direction, FpConvention fp, Provenance provenance)
    : knots_(std::move(knots)), direction_(direction), fp_(fp), provenance_(provenance) {
    constexpr double tol = 1e-9;
    if (knots_.size() < 2) {
        throw InputError("ROC curve needs at least two knots");
    }
    if (std::abs(knots_.front().p) > tol || std::abs(knots_.front().r) > tol ||
        std::abs(knots_.back().p - 1.0) > tol || std::abs(knots_.back().r - 1.0) > tol) {
        throw InputError("ROC curve must run from (0,0) to (1,1)");
    }
    knots_.front().p = knots_.front().r = 0.0;
    knots_.back().p = knots_.back().r = 1.0;
    for (std::size_t k = 1; k < knots_.size(); ++k) {
        if (knots_[k].p < knots_[k - 1].p || knots_[k].r < knots_[k - 1].r) {
            throw InputError("ROC knots must be nondecreasing in p and r");
        }
    }
}

double RocCurve::eval(double p) const {
    p = std::clamp(p, 0.0, 1.0);
    const auto it = std::lower_bound(knots_.begin(), knots_.end(), p,
                                     [](const RocKnot& k, double v) { return k.p < v; });
    if (it == knots_.begin()) return it->r;
    if (it == knots_.end()) return knots_.back().r;
    if (it->p == p) return it->r;
    const auto& a = *(it - 1);
    const auto& b = *it;
    return a.r + (b.r - a.r) * (p - a.p) / (b.p - a.p);
}

double RocCurve::eval_right(double p) const {
    p = std::clamp(p, 0.0, 1.0);
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), p,
                                     [](double v, const RocKnot& k) { return v < k.p; });
    if (it == knots_.end()) return knots_.back().r;
    if (it == knots_.begin()) return it->r;
    const auto& a = *(it - 1);
    if (a.p == p) return a.r;
    const auto& b = *it;
    return a.r + (b.r - a.r) * (p - a.p) / (b.p - a.p);
}

// ---------------------------------------------------------------- summaries

double auc(const RocCurve& c) {
    const auto k = c.knots();
    double area = 0.0;
    for (std::size_t i = 1; i < k.size(); ++i) {
        area += 0.5 * (k[i].p - k[i - 1].p) * (k[i].r + k[i - 1].r);
    }
    return area;
}

double youden(const RocCurve& c, bool two_sided) {
    double best = 0.0;
    for (const auto& k : c.knots()) {
        const double d = k.r - k.p;
        best = std::max(best, two_sided ? std::abs(d) : d);
    }
    return best;
}

double gini(const RocCurve& c) { return 2.0 * auc(c) - 1.0; }

RocSummary summarize(const RocCurve& c) {
    RocSummary s;
    s.auc = auc(c);
    s.youden_one_sided = youden(c, false);
    s.youden_two_sided = youden(c, true);
    s.gini = 2.0 * s.auc - 1.0;
    return s;
}

RocCurve reverse(const RocCurve& c) {
    std::vector<RocKnot> out;
    out.reserve(c.size());
    const auto k = c.knots();
    const std::size_t last = k.size() - 1;
    // {score >= t_j} complemented is {score <= t_{j+1}}, so reversed knot i
    // (original last - i) takes the threshold of original knot last - i + 1
    for (std::size_t i = 0; i <= last; ++i) {
        out.push_back({1.0 - k[last - i].p, 1.0 - k[last - i].r, i == 0 ? kNaN : k[last - i + 1].t});
    }
    RocCurve r(std::move(out), c.direction() == Direction::high ? Direction::low : Direction::high,
               c.fp_convention(), c.provenance());
    r.excluded = c.excluded;
    return r;
}

double eval(const RocCurve& c, double p) { return c.eval(p); }

// ---------------------------------------------------------------- construction

RocCurve roc_from_masses(std::span<const ScoredMass> positives, std::span<const ScoredMass> negatives,
                         Direction direction, FpConvention fp, Provenance provenance) {
    std::vector<Tagged> all;
    all.reserve(positives.size() + negatives.size());
    for (const auto& s : positives) all.push_back({s.score, s.mass, true});
    for (const auto& s : negatives) all.push_back({s.score, s.mass, false});
    if (direction == Direction::high) {
        std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) { return a.score > b.score; });
    } else {
        std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) { return a.score < b.score; });
    }

    std::vector<double> tp{0.0};
    std::vector<double> fpv{0.0};
    std::vector<double> thr{kNaN};
    double ctp = 0.0;
    double cfp = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (all[i].positive) {
            ctp += all[i].mass;
        } else {
            cfp += all[i].mass;
        }
        if (i + 1 < all.size() && all[i + 1].score == all[i].score) {
            continue;
        }
        tp.push_back(ctp);
        fpv.push_back(cfp);
        thr.push_back(all[i].score);
    }
    if (!(ctp > 0.0)) {
        throw InputError("ROC needs positive total mass in the positive group");
    }
    if (!(cfp > 0.0)) {
        throw InputError("ROC needs positive total mass in the reference (negative) group");
    }
    std::vector<RocKnot> knots;
    knots.reserve(tp.size());
    for (std::size_t k = 0; k < tp.size(); ++k) {
        // drop knots that repeat the previous vertex (zero-mass groups)
        if (k > 0 && tp[k] == tp[k - 1] && fpv[k] == fpv[k - 1]) {
            knots.back().t = thr[k];
            continue;
        }
        knots.push_back({fpv[k] / cfp, tp[k] / ctp, thr[k]});
    }
    return RocCurve(std::move(knots), direction, fp, provenance);
}

RocCurve roc_binary(std::span<const double> scores, std::span<const int> labels, std::span<const double> weights,
                    FpConvention fp, Direction direction) {
    if (scores.size() != labels.size() || (!weights.empty() && weights.size() != scores.size())) {
        throw InputError("scores, labels and weights must have equal length");
    }
    std::vector<ScoredMass> pos;
    std::vector<ScoredMass> neg;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) {
            throw InputError("labels must be 0 or 1");
        }
        if (labels[i] == 1) {
            pos.push_back({scores[i], weights.empty() ? 1.0 : weights[i]});
        }
        if (labels[i] == 0 || fp != FpConvention::absence) {
            neg.push_back({scores[i], 1.0});
        }
    }
    if (pos.empty()) {
        throw InputError("ROC needs at least one positive");
    }
    if (fp == FpConvention::absence && std::none_of(labels.begin(), labels.end(), [](int l) { return l == 0; })) {
        throw InputError("absence-only FP convention needs at least one negative");
    }
    return roc_from_masses(pos, neg, direction, fp, Provenance::empirical);
}

RocCurve roc_covariate_grid(const PresenceGrid& grid, const Raster& z, Direction direction, FpConvention fp,
                            const Raster* baseline) {
    std::vector<ScoredMass> pos;
    std::vector<ScoredMass> neg;
    std::size_t excluded = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const Presence s = grid[j];
        if (s == Presence::unknown) continue;
        const Point c = grid.grid().center(j);
        const double zj = z.grid() == grid.grid() ? z[j] : z.at(c);
        double b = grid.weight(j);
        if (baseline) {
            b = baseline->grid() == grid.grid() ? (*baseline)[j] : baseline->at(c);
        }
        if (!std::isfinite(zj) || !std::isfinite(b)) {
            ++excluded;
            continue;
        }
        if (s == Presence::present) {
            pos.push_back({zj, 1.0});
        }
        if (s == Presence::absent || fp != FpConvention::absence) {
            neg.push_back({zj, b});
        }
    }
    if (pos.empty()) {
        throw InputError("presence grid has no present cells with a known covariate");
    }
    if (neg.empty()) {
        throw InputError("presence grid has no reference cells for the FP rate");
    }
    RocCurve c = roc_from_masses(pos, neg, direction, fp, Provenance::empirical);
    c.excluded = excluded;
    return c;
}

RocCurve roc_covariate_pp(const PointPattern& pp, const Raster& z, Direction direction, const Raster* baseline,
                          bool use_weights) {
    if (pp.empty()) {
        throw InputError("point pattern is empty");
    }
    std::vector<ScoredMass> pos;
    pos.reserve(pp.size());
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < pp.size(); ++i) {
        const double zi = z.at(pp.points()[i]);
        if (!std::isfinite(zi)) {
            ++excluded;
            continue;
        }
        pos.push_back({zi, use_weights ? pp.weight(i) : 1.0});
    }
    const CellSample cells = cell_sample(z, pp.window(), baseline);
    std::vector<ScoredMass> neg(cells.value.size());
    for (std::size_t k = 0; k < neg.size(); ++k) {
        neg[k] = {cells.value[k], cells.mass[k]};
    }
    if (pos.empty()) {
        throw InputError("no data point has a finite covariate value");
    }
    RocCurve c = roc_from_masses(pos, neg, direction, FpConvention::area, Provenance::empirical);
    c.excluded = excluded + cells.missing;
    return c;
}

RocCurve roc_casecontrol(const PointPattern& pp, const Raster& z, Direction direction) {
    if (!pp.marks()) {
        throw InputError("case-control ROC needs case/control marks");
    }
    std::vector<double> cases;
    std::vector<double> controls;
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < pp.size(); ++i) {
        const double zi = z.at(pp.points()[i]);
        if (!std::isfinite(zi)) {
            ++excluded;
            continue;
        }
        ((*pp.marks())[i] == 1 ? cases : controls).push_back(zi);
    }
    RocCurve c = roc_casecontrol(cases, controls, direction);
    c.excluded = excluded;
    return c;
}

RocCurve roc_casecontrol(std::span<const double> case_scores, std::span<const double> control_scores,
                         Direction direction) {
    if (case_scores.empty() || control_scores.empty()) {
        throw InputError("case-control ROC needs at least one case and one control");
    }
    std::vector<ScoredMass> pos;
    std::vector<ScoredMass> neg;
    for (double s : case_scores) pos.push_back({s, 1.0});
    for (double s : control_scores) neg.push_back({s, 1.0});
    return roc_from_masses(pos, neg, direction, FpConvention::absence, Provenance::empirical);
}

}  // namespace sproc
