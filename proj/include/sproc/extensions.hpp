#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sproc/inference.hpp"
#include "sproc/model_fit.hpp"
#include "sproc/roc.hpp"

namespace sproc {

// C-ROC with every sum and integral restricted to B.
RocCurve roc_restricted(const PointPattern& pp, const Raster& z, const Window& b, Direction direction = Direction::high,
                        const Raster* baseline = nullptr);
RocCurve roc_restricted(const PresenceGrid& grid, const Raster& z, const Window& b,
                        Direction direction = Direction::high, FpConvention fp = FpConvention::all_pixels);

// w_i = 1 / q_i for detection probabilities q_i in (0, 1].
std::vector<double> horvitz_thompson_weights(std::span<const double> q);
// C-ROC with the TP sums weighted by 1 / q_i; the FP side is unchanged.
RocCurve roc_horvitz_thompson(const PointPattern& pp, std::span<const double> q, const Raster& z,
                              Direction direction = Direction::high);

struct PartialRoc {
    std::string covariate;
    RocCurve curve;
    double partial_auc = 0.5;
};

// C-ROC of the dropped covariate relative to the fitted intensity (or
// presence probability) of the model refitted without it.
PartialRoc partial_roc_drop(const PoissonPPModel& model, std::span<const Raster> covariates, const PointPattern& pp,
                            const std::string& drop, Direction direction = Direction::high);
PartialRoc partial_roc_drop(const LogisticModel& model, std::span<const Raster> covariates, const PresenceGrid& grid,
                            const std::string& drop, Direction direction = Direction::high,
                            FpConvention fp = FpConvention::absence);

// C-ROC of a candidate covariate relative to the original fitted model.
PartialRoc partial_roc_add(const PoissonPPModel& model, const Raster& candidate, const PointPattern& pp,
                           const std::string& name = "candidate", Direction direction = Direction::high);
PartialRoc partial_roc_add(const LogisticModel& model, const Raster& candidate, const PresenceGrid& grid,
                           const std::string& name = "candidate", Direction direction = Direction::high,
                           FpConvention fp = FpConvention::absence);

// Pooled C-ROC of two disjoint subregions from their curves, point counts,
// areas and spatial cdfs:
//   F = (a1 F1 + a2 F2) / (a1 + a2),
//   lo R(p) = [n1 lo R1(F1(F^{-1}(p))) + n2 lo R2(F2(F^{-1}(p)))] / (n1 + n2).
// Worked in the low orientation; high curves are reversed on the way in and
// out. Exact for the discrete estimators when every point lies in a cell of
// its own subregion.
RocCurve reconstruct_partition(const RocCurve& r1, const RocCurve& r2, double n1, double n2, double a1, double a2,
                               const StepCdf& f1, const StepCdf& f2);

struct RocComparison {
    double max_gap = 0.0;
    std::vector<double> p;    // union of knot abscissae
    std::vector<double> gap;  // empirical - predicted (left limits)
    std::optional<double> inside_band;
};

RocComparison compare_roc(const RocCurve& empirical, const RocCurve& predicted,
                          const ConfidenceBand* band = nullptr);

}  // namespace sproc
