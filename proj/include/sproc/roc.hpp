#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sproc/spatial_domain.hpp"

namespace sproc {

// Which side of a threshold counts as a predicted presence.
enum class Direction { high, low };

// Denominator used for the false positive rate.
//   absence    - absence cells / negative items only
//   all_pixels - every known cell / every item
//   area       - area measure of the window (point pattern data)
enum class FpConvention { absence, all_pixels, area };

enum class Provenance { empirical, theoretical, model_predicted, smoothed };

std::string_view to_string(Direction d);
std::string_view to_string(FpConvention c);
std::string_view to_string(Provenance p);
Direction direction_from_string(std::string_view s);
FpConvention fp_convention_from_string(std::string_view s);
Provenance provenance_from_string(std::string_view s);

// (p, r) vertex of an ROC polyline. `t` is the threshold at which the knot is
// reached: predicted presence means score >= t (high) or score <= t (low).
// NaN for the origin knot.
struct RocKnot {
    double p = 0.0;
    double r = 0.0;
    double t = 0.0;
};

// Monotone polyline from (0,0) to (1,1), linear between knots.
class RocCurve {
public:
    RocCurve(std::vector<RocKnot> knots, Direction direction, FpConvention fp, Provenance provenance);

    std::span<const RocKnot> knots() const { return knots_; }
    Direction direction() const { return direction_; }
    FpConvention fp_convention() const { return fp_; }
    Provenance provenance() const { return provenance_; }
    std::size_t size() const { return knots_.size(); }

    // Left-continuous evaluation of the polyline; at a vertical segment
    // returns its lowest r.
    double eval(double p) const;
    // Right-continuous counterpart; returns the highest r of a vertical segment.
    double eval_right(double p) const;

    // Data items or cells dropped for missing covariate values.
    std::size_t excluded = 0;

private:
    std::vector<RocKnot> knots_;
    Direction direction_;
    FpConvention fp_;
    Provenance provenance_;
};

struct RocSummary {
    double auc = 0.5;
    double youden_one_sided = 0.0;
    double youden_two_sided = 0.0;
    double gini = 0.0;
};

double auc(const RocCurve& c);
double youden(const RocCurve& c, bool two_sided = false);
double gini(const RocCurve& c);
RocSummary summarize(const RocCurve& c);
// lo R(p) = 1 - R(1 - p): knots map to (1 - p, 1 - r), direction flips.
RocCurve reverse(const RocCurve& c);
double eval(const RocCurve& c, double p);

// A score carrying positive-class (TP) or reference (FP) mass.
struct ScoredMass {
    double score = 0.0;
    double mass = 0.0;
};

// Empirical-style curve from two weighted score samples. Every distinct score
// becomes one knot; tied scores move TP and FP together.
RocCurve roc_from_masses(std::span<const ScoredMass> positives, std::span<const ScoredMass> negatives,
                         Direction direction, FpConvention fp, Provenance provenance);

RocCurve roc_binary(std::span<const double> scores, std::span<const int> labels,
                    std::span<const double> weights = {}, FpConvention fp = FpConvention::all_pixels,
                    Direction direction = Direction::high);

// C-ROC for presence-absence cells. FP weights are the baseline raster when
// supplied, otherwise the grid's own cell weights (1 when absent).
RocCurve roc_covariate_grid(const PresenceGrid& grid, const Raster& z, Direction direction = Direction::high,
                            FpConvention fp = FpConvention::all_pixels, const Raster* baseline = nullptr);

// C-ROC for a mapped point pattern: TP over points, FP over window area.
RocCurve roc_covariate_pp(const PointPattern& pp, const Raster& z, Direction direction = Direction::high,
                          const Raster* baseline = nullptr, bool use_weights = true);

// C-ROC treating cases (mark 1) as positives and controls (mark 0) as negatives.
RocCurve roc_casecontrol(const PointPattern& pp, const Raster& z, Direction direction = Direction::high);
RocCurve roc_casecontrol(std::span<const double> case_scores, std::span<const double> control_scores,
                         Direction direction = Direction::high);

}  // namespace sproc
