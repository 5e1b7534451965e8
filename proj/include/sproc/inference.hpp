#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sproc/model_fit.hpp"
#include "sproc/roc.hpp"

namespace sproc {

enum class Sidedness { one, two };
// greater: cases / data points tend to have larger covariate values.
enum class Alternative { two_sided, greater, less };

std::string_view to_string(Sidedness s);
Alternative alternative_from_string(std::string_view s);

struct TestResult {
    std::string method;
    double statistic = 0.0;
    double p_value = 1.0;
    Sidedness sidedness = Sidedness::two;
    std::size_t n = 0;
};

enum class BandMethod { binomial_plugin, smooth_plugin, monte_carlo, envelope };
std::string_view to_string(BandMethod m);
BandMethod band_method_from_string(std::string_view s);

struct ConfidenceBand {
    std::vector<double> p;
    std::vector<double> center;  // the estimate the band is built around
    std::vector<double> lower;
    std::vector<double> upper;
    double level = 0.95;
    BandMethod method = BandMethod::binomial_plugin;
    // Grid points where the band was widened to [0, 1] (smooth band with a
    // vanishing control density).
    std::vector<std::uint8_t> flagged;
    std::size_t nsim = 0;
    std::size_t failures = 0;
};

// 0, 1/(m-1), ..., 1
std::vector<double> uniform_p_grid(std::size_t m = 101);

// Probability integral transform of the covariate values at the data points
// under the spatial cdf F0 of Z over W, using the mid-distribution value
// F0(z-) + dF0(z)/2. Points with a missing covariate are skipped.
std::vector<double> pit_values(const PointPattern& pp, const Raster& z, const Window& w);

struct BermanResult {
    TestResult z1;
    TestResult z2;
};
BermanResult berman_tests(const PointPattern& pp, const Raster& z, const Window& w,
                          Alternative alt = Alternative::two_sided);

struct CdfTestResult {
    TestResult ks;
    TestResult ks_one_sided;  // D+ = max (F0 - Fhat)+ : points favour high Z
    TestResult cvm;
    TestResult ad;
};
CdfTestResult cdf_tests(const PointPattern& pp, const Raster& z, const Window& w);

struct WilcoxonResult {
    TestResult test;
    double auc = 0.5;
};
// Mann-Whitney U1 of the cases with midranks, tie-corrected variance and a
// continuity correction.
WilcoxonResult wilcoxon_auc(std::span<const double> cases, std::span<const double> controls,
                            Alternative alt = Alternative::two_sided);

// Rhat(p) +- z sqrt(Rhat (1 - Rhat) / n), truncated to [0, 1].
ConfidenceBand band_binomial(const RocCurve& curve, std::size_t n, double level = 0.95,
                             std::vector<double> p_grid = {});

struct SimulationOptions {
    std::size_t nsim = 99;
    double level = 0.95;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::vector<double> p_grid;  // empty: uniform_p_grid()
};

// Simulate from the fitted model, refit on the same covariates, recompute the
// M-ROC; band = observed curve +- z * Monte-Carlo SD. More than 20% failed
// refits raise NumericalError.
ConfidenceBand band_monte_carlo(const PoissonPPModel& model, std::span<const Raster> covariates,
                                const PointPattern& pp, const SimulationOptions& opt = {});
ConfidenceBand band_monte_carlo(const LogisticModel& model, std::span<const Raster> covariates,
                                const PresenceGrid& grid, const SimulationOptions& opt = {});

struct EnvelopeOptions : SimulationOptions {
    std::size_t rank = 1;  // 1 = min/max, k = k-th smallest / largest
    Direction direction = Direction::high;
};

// Pointwise envelope of the C-ROC curves of Z over nsim Poisson patterns with
// the given intensity. `center` holds the pointwise mean.
ConfidenceBand envelope(const Raster& intensity, const Raster& z, const Window& w, const EnvelopeOptions& opt = {});
ConfidenceBand envelope(const PoissonPPModel& model, const Raster& z, const Window& w,
                        const EnvelopeOptions& opt = {});

// Fraction of grid points where the curve lies in [lower, upper] (with a
// 1e-12 slack for rounding).
double band_inclusion(const ConfidenceBand& band, const RocCurve& curve);

}  // namespace sproc
