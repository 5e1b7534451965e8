#include "sproc/spatial_domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sproc/error.hpp"

namespace sproc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double point_segment_distance(Point p, const Segment& s) {
    const double vx = s.b.x - s.a.x;
    const double vy = s.b.y - s.a.y;
    const double len2 = vx * vx + vy * vy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = ((p.x - s.a.x) * vx + (p.y - s.a.y) * vy) / len2;
        t = std::clamp(t, 0.0, 1.0);
    }
    return std::hypot(p.x - (s.a.x + t * vx), p.y - (s.a.y + t * vy));
}

void check_grid(const GridSpec& g) {
    if (!(g.dx > 0.0) || !(g.dy > 0.0) || g.ncol <= 0 || g.nrow <= 0) {
        throw InputError("grid must have positive cell size and dimensions");
    }
}

}  // namespace

// ---------------------------------------------------------------- GridSpec

GridSpec GridSpec::tiling(double xmin, double xmax, double ymin, double ymax, int ncol, int nrow) {
    if (!(xmax > xmin) || !(ymax > ymin) || ncol <= 0 || nrow <= 0) {
        throw InputError("invalid grid tiling request");
    }
    return GridSpec{xmin, ymin, (xmax - xmin) / ncol, (ymax - ymin) / nrow, ncol, nrow};
}

Point GridSpec::center(std::size_t index) const {
    const auto row = static_cast<double>(index / static_cast<std::size_t>(ncol));
    const auto col = static_cast<double>(index % static_cast<std::size_t>(ncol));
    return {x0 + (col + 0.5) * dx, y0 + (row + 0.5) * dy};
}

std::optional<std::size_t> GridSpec::cell_of(double x, double y) const {
    double fc = std::floor((x - x0) / dx);
    double fr = std::floor((y - y0) / dy);
    // the outer upper edge belongs to the last cell
    if (fc == ncol && x == xmax()) fc -= 1;
    if (fr == nrow && y == ymax()) fr -= 1;
    if (!(fc >= 0.0) || !(fr >= 0.0) || fc >= ncol || fr >= nrow) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(fr) * static_cast<std::size_t>(ncol) + static_cast<std::size_t>(fc);
}

// ---------------------------------------------------------------- Window

Window::Window(double xmin, double xmax, double ymin, double ymax)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax) {
    if (!(xmax > xmin) || !(ymax > ymin)) {
        throw InputError("window requires xmax > xmin and ymax > ymin");
    }
}

Window::Window(double xmin, double xmax, double ymin, double ymax, Mask mask)
    : Window(xmin, xmax, ymin, ymax) {
    check_grid(mask.grid);
    if (mask.inside.size() != mask.grid.size()) {
        throw InputError("mask size does not match its grid");
    }
    masks_.push_back(std::move(mask));
    if (!(area() > 0.0)) {
        throw InputError("masked window has zero area");
    }
}

bool Window::contains(double x, double y) const {
    if (!(x >= xmin_ && x <= xmax_ && y >= ymin_ && y <= ymax_)) {
        return false;
    }
    for (const auto& m : masks_) {
        const auto cell = m.grid.cell_of(x, y);
        if (!cell || !m.inside[*cell]) {
            return false;
        }
    }
    return true;
}

double Window::area() const {
    if (masks_.empty()) {
        return (xmax_ - xmin_) * (ymax_ - ymin_);
    }
    const auto& g = masks_.front().grid;
    std::size_t count = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (contains(g.center(i))) {
            ++count;
        }
    }
    return static_cast<double>(count) * g.cell_area();
}

Window Window::intersect(const Window& other) const {
    Window out;
    out.xmin_ = std::max(xmin_, other.xmin_);
    out.xmax_ = std::min(xmax_, other.xmax_);
    out.ymin_ = std::max(ymin_, other.ymin_);
    out.ymax_ = std::min(ymax_, other.ymax_);
    if (!(out.xmax_ > out.xmin_) || !(out.ymax_ > out.ymin_)) {
        throw InputError("window intersection is empty");
    }
    out.masks_ = masks_;
    out.masks_.insert(out.masks_.end(), other.masks_.begin(), other.masks_.end());
    if (!(out.area() > 0.0)) {
        throw InputError("window intersection is empty");
    }
    return out;
}

// ---------------------------------------------------------------- Raster

Raster::Raster(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    check_grid(grid_);
    if (values_.size() != grid_.size()) {
        throw InputError("raster has " + std::to_string(values_.size()) + " values for " +
                         std::to_string(grid_.size()) + " cells");
    }
}

Raster Raster::constant(const GridSpec& grid, double value) {
    return Raster(grid, std::vector<double>(grid.size(), value));
}

double Raster::at(double x, double y) const {
    const auto cell = grid_.cell_of(x, y);
    return cell ? values_[*cell] : kNaN;
}

bool Raster::is_missing(std::size_t i) const { return !std::isfinite(values_[i]); }

// ---------------------------------------------------------------- PointPattern

PointPattern::PointPattern(std::vector<Point> points, Window window, std::optional<std::vector<int>> marks,
                           std::optional<std::vector<double>> weights)
    : points_(std::move(points)), window_(std::move(window)), marks_(std::move(marks)), weights_(std::move(weights)) {
    for (const auto& p : points_) {
        if (!window_.contains(p)) {
            throw InputError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") lies outside the window");
        }
    }
    if (marks_ && marks_->size() != points_.size()) {
        throw InputError("marks length differs from number of points");
    }
    if (weights_) {
        if (weights_->size() != points_.size()) {
            throw InputError("weights length differs from number of points");
        }
        for (double w : *weights_) {
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw InputError("point weights must be finite and nonnegative");
            }
        }
    }
}

PointPattern PointPattern::with_weights(std::vector<double> weights) const {
    return PointPattern(points_, window_, marks_, std::move(weights));
}

PointPattern PointPattern::without_weights() const { return PointPattern(points_, window_, marks_, std::nullopt); }

// ---------------------------------------------------------------- PresenceGrid

PresenceGrid::PresenceGrid(GridSpec grid, std::vector<Presence> status, std::optional<std::vector<double>> weights)
    : grid_(grid), status_(std::move(status)), weights_(std::move(weights)) {
    check_grid(grid_);
    if (status_.size() != grid_.size()) {
        throw InputError("presence grid status size does not match grid");
    }
    if (weights_) {
        if (weights_->size() != grid_.size()) {
            throw InputError("presence grid weights size does not match grid");
        }
        for (double b : *weights_) {
            if (!(b >= 0.0)) {
                throw InputError("presence grid weights must be nonnegative");
            }
        }
    }
    if (count(Presence::unknown) == status_.size()) {
        throw InputError("presence grid has no known cells");
    }
}

std::size_t PresenceGrid::count(Presence s) const {
    return static_cast<std::size_t>(std::count(status_.begin(), status_.end(), s));
}

// ---------------------------------------------------------------- ProbabilityGrid

ProbabilityGrid::ProbabilityGrid(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    check_grid(grid_);
    if (values_.size() != grid_.size()) {
        throw InputError("probability grid size does not match grid");
    }
    double total = 0.0;
    for (double v : values_) {
        if (std::isnan(v)) {
            continue;
        }
        if (!(v >= 0.0 && v <= 1.0)) {
            throw InputError("presence probabilities must lie in [0, 1]");
        }
        total += v;
    }
    if (!(total > 0.0)) {
        throw InputError("presence probabilities sum to zero");
    }
}

// ---------------------------------------------------------------- StepCdf

StepCdf::StepCdf(std::vector<double> breaks, std::vector<double> cumulative, std::size_t missing_cells)
    : breaks_(std::move(breaks)), cum_(std::move(cumulative)), missing_(missing_cells) {
    if (breaks_.empty() || breaks_.size() != cum_.size()) {
        throw InputError("step cdf needs matching, nonempty breaks and values");
    }
    for (std::size_t k = 0; k < breaks_.size(); ++k) {
        if (k > 0 && !(breaks_[k] > breaks_[k - 1])) {
            throw InputError("step cdf breaks must be strictly increasing");
        }
        if (!(cum_[k] >= 0.0 && cum_[k] <= 1.0 + 1e-12) || (k > 0 && cum_[k] < cum_[k - 1])) {
            throw InputError("step cdf values must be nondecreasing in [0, 1]");
        }
    }
    if (std::abs(cum_.back() - 1.0) > 1e-9) {
        throw InputError("step cdf must reach 1");
    }
    cum_.back() = 1.0;
}

double StepCdf::operator()(double z) const {
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), z);
    return it == breaks_.begin() ? 0.0 : cum_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double StepCdf::left_limit(double z) const {
    const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), z);
    return it == breaks_.begin() ? 0.0 : cum_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double StepCdf::mid(double z) const { return 0.5 * (left_limit(z) + (*this)(z)); }

double StepCdf::quantile(double p) const {
    if (p <= 0.0) {
        return breaks_.front();
    }
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), p);
    if (it == cum_.end()) {
        return breaks_.back();
    }
    return breaks_[static_cast<std::size_t>(it - cum_.begin())];
}

StepCdf::Location StepCdf::locate(double p) const {
    if (p <= 0.0) {
        return {0, 0.0};
    }
    auto it = std::lower_bound(cum_.begin(), cum_.end(), p);
    if (it == cum_.end()) {
        return {cum_.size() - 1, 1.0};
    }
    const auto k = static_cast<std::size_t>(it - cum_.begin());
    const double prev = k == 0 ? 0.0 : cum_[k - 1];
    const double jump = cum_[k] - prev;
    return {k, jump > 0.0 ? std::clamp((p - prev) / jump, 0.0, 1.0) : 1.0};
}

// ---------------------------------------------------------------- operations

double CellSample::total_mass() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

CellSample cell_sample(const Raster& z, const Window& w, const Raster* baseline) {
    CellSample out;
    const GridSpec& g = z.grid();
    const double a = g.cell_area();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Point c = g.center(i);
        if (!w.contains(c)) {
            continue;
        }
        double b = 1.0;
        if (baseline) {
            b = baseline->grid() == g ? (*baseline)[i] : baseline->at(c);
            if (b < 0.0) {
                throw InputError("baseline must be nonnegative");
            }
        }
        if (!std::isfinite(z[i]) || !std::isfinite(b)) {
            ++out.missing;
            continue;
        }
        out.index.push_back(i);
        out.value.push_back(z[i]);
        out.mass.push_back(a * b);
    }
    return out;
}

PresenceGrid discretise(const PointPattern& pp, const GridSpec& grid) {
    check_grid(grid);
    const Window& w = pp.window();
    const double tol = 1e-9 * std::max(grid.dx, grid.dy);
    if (grid.x0 > w.xmin() + tol || grid.y0 > w.ymin() + tol || grid.xmax() < w.xmax() - tol ||
        grid.ymax() < w.ymax() - tol) {
        throw InputError("grid does not cover the window of the point pattern");
    }
    std::vector<Presence> status(grid.size(), Presence::unknown);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (w.contains(grid.center(i))) {
            status[i] = Presence::absent;
        }
    }
    for (const auto& p : pp.points()) {
        const auto cell = grid.cell_of(p);
        if (cell && status[*cell] != Presence::unknown) {
            status[*cell] = Presence::present;
        }
    }
    return PresenceGrid(grid, std::move(status));
}

StepCdf spatial_cdf(const Raster& z, const Window& w, const Raster* baseline) {
    const CellSample s = cell_sample(z, w, baseline);
    if (s.value.empty()) {
        throw InputError("covariate has no finite values inside the window");
    }
    std::vector<std::size_t> order(s.value.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.value[a] < s.value[b]; });
    const double total = s.total_mass();
    if (!(total > 0.0)) {
        throw InputError("baseline has zero total mass inside the window");
    }
    std::vector<double> breaks;
    std::vector<double> cum;
    double run = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        run += s.mass[order[k]];
        const double v = s.value[order[k]];
        if (k + 1 < order.size() && s.value[order[k + 1]] == v) {
            continue;
        }
        // zero-mass values carry no probability; skip them as breakpoints
        if (!cum.empty() && run / total == cum.back()) {
            continue;
        }
        if (cum.empty() && run == 0.0) {
            continue;
        }
        breaks.push_back(v);
        cum.push_back(run / total);
    }
    return StepCdf(std::move(breaks), std::move(cum), s.missing);
}

Raster distance_transform(std::span<const Point> features, const GridSpec& grid) {
    check_grid(grid);
    if (features.empty()) {
        throw InputError("distance transform needs at least one feature");
    }
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point c = grid.center(i);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& f : features) {
            best = std::min(best, std::hypot(c.x - f.x, c.y - f.y));
        }
        v[i] = best;
    }
    return Raster(grid, std::move(v));
}

Raster distance_transform(std::span<const Segment> features, const GridSpec& grid) {
    check_grid(grid);
    if (features.empty()) {
        throw InputError("distance transform needs at least one feature");
    }
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point c = grid.center(i);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& s : features) {
            best = std::min(best, point_segment_distance(c, s));
        }
        v[i] = best;
    }
    return Raster(grid, std::move(v));
}

Window restrict(const Window& w, const Window& b) { return w.intersect(b); }

Raster restrict(const Raster& r, const Window& b) {
    std::vector<double> v(r.values().begin(), r.values().end());
    bool any = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!b.contains(r.grid().center(i))) {
            v[i] = kNaN;
        } else {
            any = true;
        }
    }
    if (!any) {
        throw InputError("restriction leaves no raster cells");
    }
    return Raster(r.grid(), std::move(v));
}

PointPattern restrict(const PointPattern& pp, const Window& b) {
    Window w = pp.window().intersect(b);
    std::vector<Point> pts;
    std::optional<std::vector<int>> marks;
    std::optional<std::vector<double>> weights;
    if (pp.marks()) marks.emplace();
    if (pp.weights()) weights.emplace();
    for (std::size_t i = 0; i < pp.size(); ++i) {
        if (!w.contains(pp.points()[i])) {
            continue;
        }
        pts.push_back(pp.points()[i]);
        if (marks) marks->push_back((*pp.marks())[i]);
        if (weights) weights->push_back((*pp.weights())[i]);
    }
    return PointPattern(std::move(pts), std::move(w), std::move(marks), std::move(weights));
}

PresenceGrid restrict(const PresenceGrid& g, const Window& b) {
    std::vector<Presence> status(g.status().begin(), g.status().end());
    for (std::size_t i = 0; i < status.size(); ++i) {
        if (!b.contains(g.grid().center(i))) {
            status[i] = Presence::unknown;
        }
    }
    if (std::all_of(status.begin(), status.end(), [](Presence s) { return s == Presence::unknown; })) {
        throw InputError("restriction leaves no known cells");
    }
    return PresenceGrid(g.grid(), std::move(status), g.weights());
}

}  // namespace sproc
