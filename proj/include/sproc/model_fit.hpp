#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sproc/spatial_domain.hpp"

namespace sproc {

struct FitControl {
    double tol = 1e-8;  // on max |delta beta|
    int max_iter = 100;
};

struct Convergence {
    int iterations = 0;
    double tol = 1e-8;
    bool converged = false;
};

// Design rows kept with a fitted model so it can be refitted for
// leave-one-out values. Row-major, intercept column first.
struct DesignData {
    std::size_t ncoef = 0;
    std::vector<double> x;
    std::vector<double> response;  // 0/1 for logistic, counts for Poisson
    std::vector<double> offset;
    std::vector<double> measure;  // quadrature weight (Poisson only)
    const double* row(std::size_t i) const { return x.data() + i * ncoef; }
    std::size_t rows() const { return ncoef == 0 ? 0 : x.size() / ncoef; }
};

// logit pi_j = offset + beta . z_j. The offset is log(cell area) for gridded
// data and 0 for case-control data.
struct LogisticModel {
    std::vector<double> coefficients;  // intercept first
    std::vector<double> std_errors;
    std::vector<std::string> covariate_names;
    double offset = 0.0;
    Convergence convergence;
    bool separation = false;
    // Covariates dropped because they are constant (aliased with the intercept);
    // their coefficient is reported as 0.
    std::vector<std::string> aliased;
    // Per-cell fitted probabilities (NaN where a covariate is missing). Absent
    // for case-control fits.
    std::optional<ProbabilityGrid> fitted;
    // For grid fits: the grid cell of each design row. For case-control fits:
    // the point index of each design row.
    std::vector<std::size_t> row_source;
    DesignData data;
    FitControl control;

    double predict_linear(std::span<const double> z) const;
    double predict(std::span<const double> z) const;
    // Fitted probability for each design row.
    std::vector<double> fitted_rows() const;
};

// log lambda(u) = beta . Z(u), fitted by Poisson likelihood with one quadrature
// node per grid cell of the first covariate (or of `grid` when there are none).
struct PoissonPPModel {
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<std::string> covariate_names;
    Convergence convergence;
    std::vector<std::string> aliased;
    Raster fitted{GridSpec{0, 0, 1, 1, 1, 1}, {0.0}};  // lambda-hat per cell, NaN outside the quadrature set
    GridSpec quadrature_grid;
    std::size_t quadrature_nodes = 0;
    double quadrature_area = 0.0;
    std::size_t dropped_points = 0;  // points in cells without a quadrature node
    // Quadrature row (cell) of each data point, or SIZE_MAX when dropped.
    std::vector<std::size_t> point_row;
    std::vector<std::size_t> row_cell;
    DesignData data;
    FitControl control;

    double predict(std::span<const double> z) const;
    double expected_count() const;
};

LogisticModel fit_logistic(const PresenceGrid& grid, std::span<const Raster> covariates,
                           std::span<const std::string> names = {}, const FitControl& control = {});

LogisticModel fit_logistic_casecontrol(const PointPattern& pp, std::span<const Raster> covariates,
                                       std::span<const std::string> names = {}, const FitControl& control = {});
// Per-point covariate values: values[k][i] is covariate k at point i.
LogisticModel fit_logistic_casecontrol(std::span<const int> marks, std::span<const std::vector<double>> values,
                                       std::span<const std::string> names = {}, const FitControl& control = {});

PoissonPPModel fit_poisson_loglinear(const PointPattern& pp, std::span<const Raster> covariates,
                                     std::span<const std::string> names = {}, const FitControl& control = {},
                                     const GridSpec* grid = nullptr);

// Leave-one-out fitted value for design row `row` of a logistic model (a grid
// cell or a case-control point), refitting without that row.
double loo_fitted(const LogisticModel& m, std::size_t row);
// Leave-one-out intensity at data point `point`: the point is removed from its
// cell count, the quadrature weights are kept, and lambda is predicted at the
// point's cell.
double loo_fitted(const PoissonPPModel& m, std::size_t point);

// All rows / all points, refits cached on identical (covariates, response)
// and run on `threads` workers (0 = default).
std::vector<double> loo_fitted_all(const LogisticModel& m, unsigned threads = 0);
std::vector<double> loo_fitted_all(const PoissonPPModel& m, unsigned threads = 0);

// Poisson process with piecewise-constant intensity: each cell whose centre
// lies in W receives Poisson(lambda * cellArea) points, uniform in the part of
// the cell inside W's rectangle. NaN cells count as zero intensity.
PointPattern simulate_poisson(const Raster& intensity, const Window& w, std::uint64_t seed);

}  // namespace sproc
