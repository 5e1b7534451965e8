#pragma once

#include <optional>
#include <span>

#include "sproc/inference.hpp"
#include "sproc/roc.hpp"

namespace sproc {

enum class Kernel { gaussian, epanechnikov };
std::string_view to_string(Kernel k);
Kernel kernel_from_string(std::string_view s);

// h1, h2 smooth the case and control cdfs; hf, hg the densities in the
// variance. Unset = Silverman's rule on the group (hf, hg default to h1, h2).
struct KernelSpec {
    Kernel kernel = Kernel::gaussian;
    std::optional<double> h1, h2, hf, hg;
};

struct Bandwidths {
    double h1 = 0.0, h2 = 0.0, hf = 0.0, hg = 0.0;
};
Bandwidths resolve_bandwidths(const KernelSpec& spec, std::span<const double> cases,
                              std::span<const double> controls);

// 0.9 min(sd, IQR / 1.34) n^(-1/5); falls back to sd when the IQR is 0.
double silverman_bandwidth(std::span<const double> samples);

// Smoothed cdf (1/n) sum K((t - z_i) / h) and density (1/(n h)) sum k(.).
double smoothed_cdf(std::span<const double> z, double h, double t, Kernel k = Kernel::gaussian);
double smoothed_density(std::span<const double> z, double h, double t, Kernel k = Kernel::gaussian);

// R~(p) = 1 - F~(G~^{-1}(1 - p)) on `points` equally spaced p in [0, 1], with
// G~^{-1} by bisection. Cases are the positives; direction high.
RocCurve smooth_roc(std::span<const double> cases, std::span<const double> controls, const KernelSpec& spec = {},
                    std::size_t points = 501);

// R~(p) +- z sigma~(p) with the plug-in asymptotic variance
//   R~(1 - R~)/n + (f~/g~)^2 (G~^{-1}(1 - p)) p (1 - p)/m.
// Where g~ < 1e-12 the band is [0, 1] and the point is flagged.
ConfidenceBand smooth_band(std::span<const double> cases, std::span<const double> controls,
                           const KernelSpec& spec = {}, double level = 0.95, std::vector<double> p_grid = {});

}  // namespace sproc
