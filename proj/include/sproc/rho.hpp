#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sproc/model_fit.hpp"
#include "sproc/roc.hpp"

namespace sproc {

enum class RhoMethod { kernel, isotonic, parametric_loglinear, from_roc };
std::string_view to_string(RhoMethod m);
RhoMethod rho_method_from_string(std::string_view s);

// rho(z) tabulated on an increasing z-grid; linear in between, constant
// beyond the ends. Masked grid points (control density below the floor) hold
// NaN and read as 0.
struct RhoEstimate {
    RhoMethod method = RhoMethod::kernel;
    std::vector<double> z;
    std::vector<double> rho;
    double kappa = 0.0;         // mean intensity n / |W|
    double lambda_total = 0.0;  // integral of rho(Z(u)) over W
    double bandwidth = 0.0;     // kernel only
    // Externally supplied pointwise band, same length as z when present.
    std::optional<std::vector<double>> lower, upper;

    double at(double z) const;
};

// rho(z) = sum_i k_h(z - z_i) / sum_cells area_c k_h(z - Z_c), both sums with
// reflection at the ends of the observed Z range. bandwidth <= 0 or unset:
// Silverman's rule on the z_i.
RhoEstimate estimate_rho_kernel(const PointPattern& pp, const Raster& z, const Window& w,
                                std::optional<double> bandwidth = std::nullopt, std::size_t grid_points = 512);

// Weighted pool-adjacent-violators fit of the cell rates n_c / area_c ordered
// by Z (ties in Z pooled first). high: nondecreasing, low: nonincreasing.
RhoEstimate estimate_rho_isotonic(const PointPattern& pp, const Raster& z, const Window& w,
                                  Direction direction = Direction::high);

// exp(b0 + b1 z) from a single-covariate loglinear Poisson fit.
RhoEstimate estimate_rho_loglinear(const PointPattern& pp, const Raster& z, const Window& w,
                                   std::size_t grid_points = 512);

// Weighted isotonic regression (nondecreasing) of y with weights w.
std::vector<double> pava(const std::vector<double>& y, const std::vector<double>& w);

// R(p) = (1/kappa) int_0^p rho(FP^{-1}(v)) dv by midpoint quadrature on the
// union of the F0 jump positions and a 512-point uniform p-grid, rescaled so
// R(1) = 1. A raw total more than 1% from 1 appends a message to `warnings`.
RocCurve roc_from_rho(const RhoEstimate& rho, const StepCdf& f0, double kappa, Direction direction = Direction::high,
                      std::vector<std::string>* warnings = nullptr);

// rho(FP^{-1}(p)) = kappa dR/dp by central differences on the knots. Knots
// that share a z (inside one jump of F0) are averaged. Only theoretical,
// model-predicted or smoothed curves are accepted. `area` = |W| sets
// lambda_total = kappa * area.
RhoEstimate rho_from_roc(const RocCurve& curve, const StepCdf& f0, double kappa, double area = 1.0);

// rho / lambda_total on the z-grid.
std::vector<double> boyce_index(const RhoEstimate& rho);

}  // namespace sproc
