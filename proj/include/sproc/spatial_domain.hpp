#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sproc {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Segment {
    Point a;
    Point b;
};

// Regular lattice of rectangular cells. Cell (row, col) covers the half-open
// box [x0 + col*dx, x0 + (col+1)*dx) x [y0 + row*dy, y0 + (row+1)*dy); row 0
// is the southern-most row. Linear index = row * ncol + col.
struct GridSpec {
    double x0 = 0.0;
    double y0 = 0.0;
    double dx = 1.0;
    double dy = 1.0;
    int ncol = 0;
    int nrow = 0;

    // Grid of ncol x nrow cells exactly tiling [xmin,xmax] x [ymin,ymax].
    static GridSpec tiling(double xmin, double xmax, double ymin, double ymax, int ncol, int nrow);

    std::size_t size() const { return static_cast<std::size_t>(ncol) * static_cast<std::size_t>(nrow); }
    double cell_area() const { return dx * dy; }
    double xmax() const { return x0 + dx * ncol; }
    double ymax() const { return y0 + dy * nrow; }
    Point center(std::size_t index) const;
    std::optional<std::size_t> cell_of(double x, double y) const;
    std::optional<std::size_t> cell_of(Point p) const { return cell_of(p.x, p.y); }

    bool operator==(const GridSpec&) const = default;
};

// Boolean field on a grid; true = inside.
struct Mask {
    GridSpec grid;
    std::vector<std::uint8_t> inside;
};

// Study region: a rectangle optionally intersected with one or more masks.
class Window {
public:
    Window(double xmin, double xmax, double ymin, double ymax);
    Window(double xmin, double xmax, double ymin, double ymax, Mask mask);

    double xmin() const { return xmin_; }
    double xmax() const { return xmax_; }
    double ymin() const { return ymin_; }
    double ymax() const { return ymax_; }
    const std::vector<Mask>& masks() const { return masks_; }

    bool contains(double x, double y) const;
    bool contains(Point p) const { return contains(p.x, p.y); }
    // Rectangle area, or (#inside mask cells) * cell area when masked.
    double area() const;
    Window intersect(const Window& other) const;

private:
    Window() = default;
    double xmin_ = 0, xmax_ = 0, ymin_ = 0, ymax_ = 0;
    std::vector<Mask> masks_;
};

// Piecewise-constant real field. Missing cells hold NaN.
class Raster {
public:
    Raster(GridSpec grid, std::vector<double> values);
    template <typename F>
    static Raster from_function(const GridSpec& grid, F&& f) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Point c = grid.center(i);
            v[i] = f(c.x, c.y);
        }
        return Raster(grid, std::move(v));
    }
    static Raster constant(const GridSpec& grid, double value);

    const GridSpec& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }
    // Value of the cell containing (x, y); NaN outside the grid.
    double at(double x, double y) const;
    double at(Point p) const { return at(p.x, p.y); }
    bool is_missing(std::size_t i) const;

private:
    GridSpec grid_;
    std::vector<double> values_;
};

class PointPattern {
public:
    PointPattern(std::vector<Point> points, Window window,
                 std::optional<std::vector<int>> marks = std::nullopt,
                 std::optional<std::vector<double>> weights = std::nullopt);

    const std::vector<Point>& points() const { return points_; }
    const Window& window() const { return window_; }
    const std::optional<std::vector<int>>& marks() const { return marks_; }
    const std::optional<std::vector<double>>& weights() const { return weights_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    // Per-point weight, 1 when the pattern is unweighted.
    double weight(std::size_t i) const { return weights_ ? (*weights_)[i] : 1.0; }

    PointPattern with_weights(std::vector<double> weights) const;
    PointPattern without_weights() const;

private:
    std::vector<Point> points_;
    Window window_;
    std::optional<std::vector<int>> marks_;
    std::optional<std::vector<double>> weights_;
};

enum class Presence : std::int8_t { unknown = -1, absent = 0, present = 1 };

class PresenceGrid {
public:
    PresenceGrid(GridSpec grid, std::vector<Presence> status,
                 std::optional<std::vector<double>> weights = std::nullopt);

    const GridSpec& grid() const { return grid_; }
    std::span<const Presence> status() const { return status_; }
    Presence operator[](std::size_t i) const { return status_[i]; }
    const std::optional<std::vector<double>>& weights() const { return weights_; }
    double weight(std::size_t i) const { return weights_ ? (*weights_)[i] : 1.0; }
    std::size_t size() const { return status_.size(); }
    double cell_area() const { return grid_.cell_area(); }
    std::size_t count(Presence s) const;

private:
    GridSpec grid_;
    std::vector<Presence> status_;
    std::optional<std::vector<double>> weights_;
};

// Per-cell presence probabilities; NaN marks unknown cells.
class ProbabilityGrid {
public:
    ProbabilityGrid(GridSpec grid, std::vector<double> values);
    const GridSpec& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }
    Raster as_raster() const { return Raster(grid_, values_); }

private:
    GridSpec grid_;
    std::vector<double> values_;
};

// Right-continuous step distribution function with jumps at `breaks`.
class StepCdf {
public:
    StepCdf(std::vector<double> breaks, std::vector<double> cumulative, std::size_t missing_cells = 0);

    std::span<const double> breaks() const { return breaks_; }
    std::span<const double> cumulative() const { return cum_; }
    std::size_t missing_cells() const { return missing_; }

    double operator()(double z) const;
    double left_limit(double z) const;
    // Mid-distribution value F(z-) + (F(z) - F(z-)) / 2.
    double mid(double z) const;
    // Right-continuous inverse inf{z : F(z) >= p}.
    double quantile(double p) const;

    // Position of probability level p inside the jump structure: the break
    // index k with F(t_{k-1}) < p <= F(t_k) and the fraction of that jump
    // below p. Used to interpolate other distributions within tied values.
    struct Location {
        std::size_t index;
        double fraction;
    };
    Location locate(double p) const;

private:
    std::vector<double> breaks_;
    std::vector<double> cum_;
    std::size_t missing_ = 0;
};

// Cells of a raster that lie inside a window with finite value, carrying
// mass = cellArea * baseline. Shared substrate of every area integral.
struct CellSample {
    std::vector<std::size_t> index;
    std::vector<double> value;
    std::vector<double> mass;
    std::size_t missing = 0;
    double total_mass() const;
};

CellSample cell_sample(const Raster& z, const Window& w, const Raster* baseline = nullptr);

PresenceGrid discretise(const PointPattern& pp, const GridSpec& grid);

StepCdf spatial_cdf(const Raster& z, const Window& w, const Raster* baseline = nullptr);

Raster distance_transform(std::span<const Point> features, const GridSpec& grid);
Raster distance_transform(std::span<const Segment> features, const GridSpec& grid);

Window restrict(const Window& w, const Window& b);
Raster restrict(const Raster& r, const Window& b);
PointPattern restrict(const PointPattern& pp, const Window& b);
PresenceGrid restrict(const PresenceGrid& g, const Window& b);

}  // namespace sproc
