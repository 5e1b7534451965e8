#include "sproc/model_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include <Eigen/Dense>

#include "sproc/error.hpp"
#include "sproc/parallel.hpp"

namespace sproc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Family { logistic, poisson };

struct GlmResult {
    Eigen::VectorXd beta;
    Eigen::VectorXd se;
    Convergence conv;
};

double logistic_fn(double eta) {
    return eta >= 0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
}

// log(1 + e^eta) without overflow
double log1pexp(double eta) { return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

double loglik(Family fam, const Eigen::VectorXd& eta, const Eigen::VectorXd& y, const Eigen::VectorXd& measure) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        if (fam == Family::logistic) {
            ll += y[i] * eta[i] - log1pexp(eta[i]);
        } else {
            ll += y[i] * eta[i] - measure[i] * std::exp(eta[i]);
        }
    }
    return ll;
}

// Newton-Raphson with step halving. Both likelihoods are concave, so a full
// step is taken whenever it does not decrease the likelihood.
GlmResult fit_glm(Family fam, const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& offset,
                  const Eigen::VectorXd& measure, const FitControl& ctl, const Eigen::VectorXd& start) {
    const Eigen::Index p = X.cols();
    Eigen::VectorXd beta = start;
    Eigen::VectorXd eta = offset + X * beta;
    double ll = loglik(fam, eta, y, measure);
    if (!std::isfinite(ll)) {
        throw NumericalError("non-finite likelihood at the starting values");
    }
    GlmResult res;
    res.conv.tol = ctl.tol;
    Eigen::VectorXd mu(y.size());
    Eigen::VectorXd w(y.size());
    auto moments = [&](const Eigen::VectorXd& e) {
        for (Eigen::Index i = 0; i < e.size(); ++i) {
            if (fam == Family::logistic) {
                mu[i] = logistic_fn(e[i]);
                w[i] = mu[i] * (1.0 - mu[i]);
            } else {
                mu[i] = measure[i] * std::exp(e[i]);
                w[i] = mu[i];
            }
        }
    };
    for (int it = 1; it <= ctl.max_iter; ++it) {
        moments(eta);
        const Eigen::VectorXd grad = X.transpose() * (y - mu);
        const Eigen::MatrixXd H = X.transpose() * w.asDiagonal() * X;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
        Eigen::VectorXd step;
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
            step = ldlt.solve(grad);
        }
        if (step.size() != p || !step.allFinite()) {
            // information matrix has collapsed (separated logistic data)
            res.conv.iterations = it;
            break;
        }
        double scale = 1.0;
        Eigen::VectorXd trial;
        double trial_ll = -std::numeric_limits<double>::infinity();
        for (int half = 0; half < 40; ++half) {
            trial = beta + scale * step;
            const Eigen::VectorXd te = offset + X * trial;
            trial_ll = loglik(fam, te, y, measure);
            if (std::isfinite(trial_ll) && trial_ll >= ll - 1e-12 * (1.0 + std::abs(ll))) break;
            scale *= 0.5;
        }
        if (!std::isfinite(trial_ll)) {
            throw NumericalError("likelihood became non-finite during fitting");
        }
        const double change = (trial - beta).cwiseAbs().maxCoeff();
        beta = trial;
        eta = offset + X * beta;
        ll = trial_ll;
        res.conv.iterations = it;
        if (change < ctl.tol) {
            res.conv.converged = true;
            break;
        }
    }
    res.beta = beta;
    moments(eta);
    const Eigen::MatrixXd H = X.transpose() * w.asDiagonal() * X;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    res.se = Eigen::VectorXd::Constant(p, kNaN);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        const Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
        for (Eigen::Index k = 0; k < p; ++k) {
            res.se[k] = inv(k, k) > 0 ? std::sqrt(inv(k, k)) : kNaN;
        }
    }
    return res;
}

// Raw covariate columns for a set of rows; columns are later filtered for
// aliasing.
struct Columns {
    std::vector<std::vector<double>> values;  // [covariate][row]
};

// Removes constant covariate columns (aliased with the intercept) and checks
// the remaining design has full column rank. Returns kept covariate indices.
std::vector<std::size_t> usable_columns(const Columns& c, std::size_t rows, std::vector<std::size_t>& dropped) {
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < c.values.size(); ++k) {
        const auto& v = c.values[k];
        const bool constant = std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
        (constant ? dropped : keep).push_back(k);
    }
    if (rows == 0) {
        return keep;
    }
    Eigen::MatrixXd X(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(keep.size() + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        X(static_cast<Eigen::Index>(i), 0) = 1.0;
        for (std::size_t k = 0; k < keep.size(); ++k) {
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k + 1)) = c.values[keep[k]][i];
        }
    }
    // centre and scale so the rank test is not fooled by units
    for (Eigen::Index k = 1; k < X.cols(); ++k) {
        const double mean = X.col(k).mean();
        X.col(k).array() -= mean;
        const double norm = X.col(k).norm();
        if (norm > 0) X.col(k) /= norm;
    }
    X.col(0) /= std::sqrt(static_cast<double>(rows));
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < X.cols()) {
        throw NumericalError("singular design: covariates are collinear");
    }
    return keep;
}

DesignData make_design(const Columns& c, const std::vector<std::size_t>& keep, std::size_t rows) {
    DesignData d;
    d.ncoef = keep.size() + 1;
    d.x.resize(rows * d.ncoef);
    for (std::size_t i = 0; i < rows; ++i) {
        d.x[i * d.ncoef] = 1.0;
        for (std::size_t k = 0; k < keep.size(); ++k) {
            d.x[i * d.ncoef + k + 1] = c.values[keep[k]][i];
        }
    }
    return d;
}

Eigen::MatrixXd to_matrix(const DesignData& d) {
    const auto rows = static_cast<Eigen::Index>(d.rows());
    const auto cols = static_cast<Eigen::Index>(d.ncoef);
    Eigen::MatrixXd X(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index k = 0; k < cols; ++k) X(i, k) = d.x[static_cast<std::size_t>(i * cols + k)];
    }
    return X;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<std::string> default_names(std::span<const std::string> names, std::size_t n) {
    if (!names.empty() && names.size() != n) {
        throw InputError("number of covariate names does not match number of covariates");
    }
    std::vector<std::string> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(names.empty() ? "z" + std::to_string(k + 1) : names[k]);
    return out;
}

double value_at_cell(const Raster& r, const GridSpec& g, std::size_t cell) {
    return r.grid() == g ? r[cell] : r.at(g.center(cell));
}

// Expands reduced-model coefficients to the full covariate list, aliased
// covariates getting coefficient 0 and SE NaN.
void expand(const GlmResult& fit, const std::vector<std::size_t>& keep, std::size_t ncov,
            std::vector<double>& coef, std::vector<double>& se) {
    coef.assign(ncov + 1, 0.0);
    se.assign(ncov + 1, kNaN);
    coef[0] = fit.beta[0];
    se[0] = fit.se[0];
    for (std::size_t k = 0; k < keep.size(); ++k) {
        coef[keep[k] + 1] = fit.beta[static_cast<Eigen::Index>(k + 1)];
        se[keep[k] + 1] = fit.se[static_cast<Eigen::Index>(k + 1)];
    }
}

LogisticModel finish_logistic(Columns cols, std::vector<double> y, double offset, std::vector<std::string> names,
                              std::vector<std::size_t> row_source, const FitControl& ctl) {
    const std::size_t rows = y.size();
    const auto npos = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1.0));
    if (npos == 0 || npos == rows) {
        throw InputError("logistic fit needs at least one presence and one absence");
    }
    std::vector<std::size_t> dropped;
    const auto keep = usable_columns(cols, rows, dropped);
    LogisticModel m;
    m.covariate_names = names;
    for (auto k : dropped) m.aliased.push_back(names[k]);
    m.offset = offset;
    m.control = ctl;
    m.data = make_design(cols, keep, rows);
    m.data.response = std::move(y);
    m.data.offset.assign(rows, offset);
    m.row_source = std::move(row_source);

    const Eigen::MatrixXd X = to_matrix(m.data);
    const Eigen::VectorXd yv = to_vector(m.data.response);
    const Eigen::VectorXd off = to_vector(m.data.offset);
    Eigen::VectorXd start = Eigen::VectorXd::Zero(X.cols());
    const double frac = static_cast<double>(npos) / static_cast<double>(rows);
    start[0] = std::log(frac / (1.0 - frac)) - offset;
    const GlmResult fit = fit_glm(Family::logistic, X, yv, off, Eigen::VectorXd(), ctl, start);
    m.convergence = fit.conv;
    m.separation = !fit.conv.converged;
    expand(fit, keep, names.size(), m.coefficients, m.std_errors);
    return m;
}

std::vector<double> reduced_beta(const LogisticModel& m) {
    std::vector<double> b{m.coefficients[0]};
    for (std::size_t k = 0; k < m.covariate_names.size(); ++k) {
        if (std::find(m.aliased.begin(), m.aliased.end(), m.covariate_names[k]) == m.aliased.end()) {
            b.push_back(m.coefficients[k + 1]);
        }
    }
    return b;
}

std::vector<double> reduced_beta(const PoissonPPModel& m) {
    std::vector<double> b{m.coefficients[0]};
    for (std::size_t k = 0; k < m.covariate_names.size(); ++k) {
        if (std::find(m.aliased.begin(), m.aliased.end(), m.covariate_names[k]) == m.aliased.end()) {
            b.push_back(m.coefficients[k + 1]);
        }
    }
    return b;
}

double dot_row(const DesignData& d, std::size_t row, const Eigen::VectorXd& beta) {
    double s = 0.0;
    const double* x = d.row(row);
    for (std::size_t k = 0; k < d.ncoef; ++k) s += x[k] * beta[static_cast<Eigen::Index>(k)];
    return s;
}

}  // namespace

// ---------------------------------------------------------------- prediction

double LogisticModel::predict_linear(std::span<const double> z) const {
    if (z.size() != covariate_names.size()) {
        throw InputError("prediction needs one value per covariate");
    }
    double eta = offset + coefficients[0];
    for (std::size_t k = 0; k < z.size(); ++k) eta += coefficients[k + 1] * z[k];
    return eta;
}

double LogisticModel::predict(std::span<const double> z) const { return logistic_fn(predict_linear(z)); }

std::vector<double> LogisticModel::fitted_rows() const {
    const std::vector<double> b = reduced_beta(*this);
    const Eigen::VectorXd beta = to_vector(b);
    std::vector<double> out(data.rows());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = logistic_fn(data.offset[i] + dot_row(data, i, beta));
    return out;
}

double PoissonPPModel::predict(std::span<const double> z) const {
    if (z.size() != covariate_names.size()) {
        throw InputError("prediction needs one value per covariate");
    }
    double eta = coefficients[0];
    for (std::size_t k = 0; k < z.size(); ++k) eta += coefficients[k + 1] * z[k];
    return std::exp(eta);
}

double PoissonPPModel::expected_count() const {
    double total = 0.0;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        if (std::isfinite(fitted[i])) total += fitted[i] * quadrature_grid.cell_area();
    }
    return total;
}

// ---------------------------------------------------------------- fitting

LogisticModel fit_logistic(const PresenceGrid& grid, std::span<const Raster> covariates,
                           std::span<const std::string> names, const FitControl& control) {
    const GridSpec& g = grid.grid();
    auto nm = default_names(names, covariates.size());
    Columns cols;
    cols.values.resize(covariates.size());
    std::vector<double> y;
    std::vector<std::size_t> src;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (grid[j] == Presence::unknown) continue;
        std::vector<double> z(covariates.size());
        bool ok = true;
        for (std::size_t k = 0; k < covariates.size(); ++k) {
            z[k] = value_at_cell(covariates[k], g, j);
            ok = ok && std::isfinite(z[k]);
        }
        if (!ok) continue;
        for (std::size_t k = 0; k < z.size(); ++k) cols.values[k].push_back(z[k]);
        y.push_back(grid[j] == Presence::present ? 1.0 : 0.0);
        src.push_back(j);
    }
    LogisticModel m = finish_logistic(std::move(cols), std::move(y), std::log(g.cell_area()), std::move(nm),
                                      std::move(src), control);
    std::vector<double> pi(g.size(), kNaN);
    std::vector<double> z(covariates.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        bool ok = true;
        for (std::size_t k = 0; k < covariates.size(); ++k) {
            z[k] = value_at_cell(covariates[k], g, j);
            ok = ok && std::isfinite(z[k]);
        }
        if (ok) pi[j] = m.predict(z);
    }
    m.fitted.emplace(g, std::move(pi));
    return m;
}

LogisticModel fit_logistic_casecontrol(const PointPattern& pp, std::span<const Raster> covariates,
                                       std::span<const std::string> names, const FitControl& control) {
    if (!pp.marks()) {
        throw InputError("case-control fit needs case/control marks");
    }
    std::vector<std::vector<double>> values(covariates.size());
    for (std::size_t k = 0; k < covariates.size(); ++k) {
        for (const auto& p : pp.points()) values[k].push_back(covariates[k].at(p));
    }
    return fit_logistic_casecontrol(*pp.marks(), values, names, control);
}

LogisticModel fit_logistic_casecontrol(std::span<const int> marks, std::span<const std::vector<double>> values,
                                       std::span<const std::string> names, const FitControl& control) {
    auto nm = default_names(names, values.size());
    Columns cols;
    cols.values.resize(values.size());
    std::vector<double> y;
    std::vector<std::size_t> src;
    for (std::size_t i = 0; i < marks.size(); ++i) {
        bool ok = true;
        for (const auto& v : values) {
            if (v.size() != marks.size()) throw InputError("covariate values and marks differ in length");
            ok = ok && std::isfinite(v[i]);
        }
        if (!ok) continue;
        for (std::size_t k = 0; k < values.size(); ++k) cols.values[k].push_back(values[k][i]);
        y.push_back(marks[i] == 1 ? 1.0 : 0.0);
        src.push_back(i);
    }
    return finish_logistic(std::move(cols), std::move(y), 0.0, std::move(nm), std::move(src), control);
}

PoissonPPModel fit_poisson_loglinear(const PointPattern& pp, std::span<const Raster> covariates,
                                     std::span<const std::string> names, const FitControl& control,
                                     const GridSpec* grid) {
    if (pp.empty()) {
        throw InputError("Poisson fit needs at least one data point");
    }
    const Window& w = pp.window();
    GridSpec g;
    if (grid) {
        g = *grid;
    } else if (!covariates.empty()) {
        g = covariates.front().grid();
    } else if (!w.masks().empty()) {
        g = w.masks().front().grid;
    } else {
        g = GridSpec::tiling(w.xmin(), w.xmax(), w.ymin(), w.ymax(), 1, 1);
    }
    auto nm = default_names(names, covariates.size());

    PoissonPPModel m;
    m.covariate_names = nm;
    m.quadrature_grid = g;
    m.control = control;
    std::vector<std::size_t> cell_row(g.size(), SIZE_MAX);
    Columns cols;
    cols.values.resize(covariates.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!w.contains(g.center(j))) continue;
        std::vector<double> z(covariates.size());
        bool ok = true;
        for (std::size_t k = 0; k < covariates.size(); ++k) {
            z[k] = value_at_cell(covariates[k], g, j);
            ok = ok && std::isfinite(z[k]);
        }
        if (!ok) continue;
        cell_row[j] = m.row_cell.size();
        m.row_cell.push_back(j);
        for (std::size_t k = 0; k < z.size(); ++k) cols.values[k].push_back(z[k]);
    }
    const std::size_t rows = m.row_cell.size();
    if (rows == 0) {
        throw InputError("no quadrature cell inside the window has finite covariates");
    }
    std::vector<double> counts(rows, 0.0);
    for (const auto& p : pp.points()) {
        const auto cell = g.cell_of(p);
        const std::size_t r = cell ? cell_row[*cell] : SIZE_MAX;
        m.point_row.push_back(r);
        if (r == SIZE_MAX) {
            ++m.dropped_points;
        } else {
            counts[r] += 1.0;
        }
    }
    const double n_used = static_cast<double>(pp.size() - m.dropped_points);
    if (n_used == 0) {
        throw InputError("no data point falls in a quadrature cell with finite covariates");
    }
    std::vector<std::size_t> dropped;
    const auto keep = usable_columns(cols, rows, dropped);
    for (auto k : dropped) m.aliased.push_back(nm[k]);
    m.data = make_design(cols, keep, rows);
    m.data.response = std::move(counts);
    m.data.offset.assign(rows, 0.0);
    m.data.measure.assign(rows, g.cell_area());
    m.quadrature_nodes = rows;
    m.quadrature_area = static_cast<double>(rows) * g.cell_area();

    const Eigen::MatrixXd X = to_matrix(m.data);
    Eigen::VectorXd start = Eigen::VectorXd::Zero(X.cols());
    start[0] = std::log(n_used / m.quadrature_area);
    const GlmResult fit = fit_glm(Family::poisson, X, to_vector(m.data.response), to_vector(m.data.offset),
                                  to_vector(m.data.measure), control, start);
    m.convergence = fit.conv;
    expand(fit, keep, nm.size(), m.coefficients, m.std_errors);

    std::vector<double> lam(g.size(), kNaN);
    for (std::size_t r = 0; r < rows; ++r) lam[m.row_cell[r]] = std::exp(dot_row(m.data, r, fit.beta));
    m.fitted = Raster(g, std::move(lam));
    return m;
}

// ---------------------------------------------------------------- leave-one-out

namespace {

double refit_logistic_without(const LogisticModel& m, std::size_t row) {
    const std::size_t rows = m.data.rows();
    if (row >= rows) {
        throw InputError("leave-one-out row " + std::to_string(row) + " out of range");
    }
    Eigen::MatrixXd X(static_cast<Eigen::Index>(rows - 1), static_cast<Eigen::Index>(m.data.ncoef));
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows - 1));
    Eigen::VectorXd off(static_cast<Eigen::Index>(rows - 1));
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        if (i == row) continue;
        for (std::size_t k = 0; k < m.data.ncoef; ++k) X(r, static_cast<Eigen::Index>(k)) = m.data.row(i)[k];
        y[r] = m.data.response[i];
        off[r] = m.data.offset[i];
        ++r;
    }
    const Eigen::VectorXd start = to_vector(reduced_beta(m));
    try {
        const GlmResult fit = fit_glm(Family::logistic, X, y, off, Eigen::VectorXd(), m.control, start);
        return logistic_fn(m.data.offset[row] + dot_row(m.data, row, fit.beta));
    } catch (const NumericalError& e) {
        throw NumericalError("leave-one-out refit for row " + std::to_string(row) + " failed: " + e.what());
    }
}

double refit_poisson_without(const PoissonPPModel& m, std::size_t row) {
    Eigen::VectorXd y = to_vector(m.data.response);
    y[static_cast<Eigen::Index>(row)] -= 1.0;
    const Eigen::VectorXd start = to_vector(reduced_beta(m));
    try {
        const GlmResult fit = fit_glm(Family::poisson, to_matrix(m.data), y, to_vector(m.data.offset),
                                      to_vector(m.data.measure), m.control, start);
        return std::exp(dot_row(m.data, row, fit.beta));
    } catch (const NumericalError& e) {
        throw NumericalError("leave-one-out refit for quadrature cell " + std::to_string(m.row_cell[row]) +
                             " failed: " + e.what());
    }
}

}  // namespace

double loo_fitted(const LogisticModel& m, std::size_t row) { return refit_logistic_without(m, row); }

double loo_fitted(const PoissonPPModel& m, std::size_t point) {
    if (point >= m.point_row.size()) {
        throw InputError("leave-one-out point " + std::to_string(point) + " out of range");
    }
    const std::size_t row = m.point_row[point];
    if (row == SIZE_MAX) return kNaN;
    return refit_poisson_without(m, row);
}

std::vector<double> loo_fitted_all(const LogisticModel& m, unsigned threads) {
    const std::size_t rows = m.data.rows();
    // rows with the same covariates and response have the same LOO value
    std::map<std::vector<double>, std::size_t> key_index;
    std::vector<std::size_t> rep;
    std::vector<std::size_t> group(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<double> key(m.data.row(i), m.data.row(i) + m.data.ncoef);
        key.push_back(m.data.response[i]);
        key.push_back(m.data.offset[i]);
        auto [it, inserted] = key_index.try_emplace(std::move(key), rep.size());
        if (inserted) rep.push_back(i);
        group[i] = it->second;
    }
    std::vector<double> value(rep.size());
    parallel_for(rep.size(), threads, [&](std::size_t g) { value[g] = refit_logistic_without(m, rep[g]); });
    std::vector<double> out(rows);
    for (std::size_t i = 0; i < rows; ++i) out[i] = value[group[i]];
    return out;
}

std::vector<double> loo_fitted_all(const PoissonPPModel& m, unsigned threads) {
    std::vector<std::size_t> rows;
    std::map<std::size_t, std::size_t> slot;
    for (std::size_t r : m.point_row) {
        if (r != SIZE_MAX && slot.try_emplace(r, rows.size()).second) rows.push_back(r);
    }
    std::vector<double> value(rows.size());
    parallel_for(rows.size(), threads, [&](std::size_t k) { value[k] = refit_poisson_without(m, rows[k]); });
    std::vector<double> out(m.point_row.size(), kNaN);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (m.point_row[i] != SIZE_MAX) out[i] = value[slot[m.point_row[i]]];
    }
    return out;
}

// ---------------------------------------------------------------- simulation

PointPattern simulate_poisson(const Raster& intensity, const Window& w, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const GridSpec& g = intensity.grid();
    std::vector<Point> pts;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double lam = intensity[j];
        if (std::isnan(lam)) continue;
        if (lam < 0.0 || std::isinf(lam)) {
            throw InputError("intensity must be finite and nonnegative");
        }
        const Point c = g.center(j);
        if (lam == 0.0 || !w.contains(c)) continue;
        std::poisson_distribution<long> count(lam * g.cell_area());
        const long n = count(rng);
        const double x0 = std::max(c.x - 0.5 * g.dx, w.xmin());
        const double x1 = std::min(c.x + 0.5 * g.dx, w.xmax());
        const double y0 = std::max(c.y - 0.5 * g.dy, w.ymin());
        const double y1 = std::min(c.y + 0.5 * g.dy, w.ymax());
        std::uniform_real_distribution<double> ux(x0, x1);
        std::uniform_real_distribution<double> uy(y0, y1);
        for (long i = 0; i < n; ++i) {
            Point p{ux(rng), uy(rng)};
            // a mask on a different grid can exclude part of the cell
            for (int tries = 0; tries < 100 && !w.contains(p); ++tries) p = {ux(rng), uy(rng)};
            if (!w.contains(p)) p = c;
            pts.push_back(p);
        }
    }
    return PointPattern(std::move(pts), w);
}

}  // namespace sproc
