#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sproc/model_fit.hpp"
#include "sproc/roc.hpp"

namespace sproc {

// Empirical M-ROC for presence-absence cells with fitted probabilities as the
// discriminant.
RocCurve roc_model_grid(const ProbabilityGrid& fitted, const PresenceGrid& grid,
                        FpConvention fp = FpConvention::all_pixels);
// With loo, each known cell is scored by its leave-one-out fitted value.
RocCurve roc_model_grid(const LogisticModel& model, const PresenceGrid& grid, bool loo,
                        FpConvention fp = FpConvention::all_pixels, unsigned threads = 0);

// Empirical M-ROC for a point pattern: TP over the points scored by the
// intensity (or its leave-one-out value), FP over the window area.
RocCurve roc_model_pp(const Raster& intensity, const PointPattern& pp);
RocCurve roc_model_pp(const PoissonPPModel& model, const PointPattern& pp, bool loo, unsigned threads = 0);

// Theoretical curve R_{S,lambda}: cells inside the window ranked by `score`,
// TP mass lambda * cellArea. FP mass is cellArea * baseline (area or
// all_pixels) or (1 - lambda) for lambda read as presence probabilities
// (absence).
struct TheoreticalRocInput {
    Raster score;
    Raster intensity;
    Window window;
    std::optional<Raster> baseline;
    Direction direction = Direction::high;
    FpConvention fp = FpConvention::area;
    Provenance provenance = Provenance::theoretical;
};

RocCurve roc_theoretical(const TheoreticalRocInput& in);
RocCurve roc_theoretical(const Raster& score, const Raster& intensity, const Window& w,
                         Direction direction = Direction::high);
// R_{pi,pi} for presence probabilities (FP weights 1 - pi).
RocCurve roc_theoretical(const ProbabilityGrid& pi, Provenance provenance = Provenance::theoretical);

// Model-predicted M-ROC R_{lambda-hat, lambda-hat} / R_{pi-hat, pi-hat}.
RocCurve roc_model_predicted(const PoissonPPModel& model, const Window& w);
RocCurve roc_model_predicted(const LogisticModel& model);

struct CurveReport {
    std::string name;
    double max_violation = 0.0;
    std::string classification;
    std::vector<double> p_grid;
    std::vector<double> values;  // per-p quantity the report is about
};

// max over the union of knot p of R_{S,lambda}(p) - R_{lambda,lambda}(p),
// floored at 0. `values` holds R_{lambda,lambda} - R_{S,lambda}.
CurveReport check_dominance(const Raster& score, const Raster& intensity, const Window& w);

// Lorenz curve of lambda over the window: ascending sort, cumulative share of
// area against cumulative share of mass. Knots (area share, mass share).
std::vector<std::pair<double, double>> lorenz_curve(const Raster& intensity, const Window& w);
// max |R_{lambda,lambda}(p) - (1 - L(1 - p))| on the union of knot p.
CurveReport lorenz_equivalence(const Raster& intensity, const Window& w);

struct ConcavityReport {
    std::string classification;  // concave, convex or neither
    bool concave = false;
    bool convex = false;
    double concavity_violation = 0.0;  // largest drop of a knot below its neighbours' chord
    double convexity_violation = 0.0;  // largest rise above it
    double max_violation() const;
};

ConcavityReport check_concavity(const RocCurve& c, double tol = 1e-9);

}  // namespace sproc
