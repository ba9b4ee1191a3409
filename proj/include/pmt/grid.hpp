#pragma once

// Uniform space-time grids, scalar fields on them, discrete differential
// operators and level-set regions.
//
// In one dimension the spatial domain is the symmetric interval [-R, R].
// For dim > 1 fields are radially symmetric and stored on r in [0, R]; the
// Laplacian then carries the (dim-1)/r f_r term, with the r -> 0 limit
// dim * f_rr(0).

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace pmt {

class SpaceTimeGrid {
public:
    SpaceTimeGrid(double t_start, double t_end, std::size_t nt, double radius, std::size_t nx, int dim);

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    std::size_t nt() const { return nt_; }
    double radius() const { return radius_; }
    std::size_t nx() const { return nx_; }
    int dim() const { return dim_; }
    double dt() const { return dt_; }
    double h() const { return h_; }
    bool radial() const { return dim_ > 1; }

    double x_min() const { return radial() ? 0.0 : -radius_; }
    double t(std::size_t n) const { return t_start_ + static_cast<double>(n) * dt_; }
    double x(std::size_t i) const { return x_min() + static_cast<double>(i) * h_; }
    std::size_t size() const { return nt_ * nx_; }
    std::size_t index(std::size_t n, std::size_t i) const { return n * nx_ + i; }

    friend bool operator==(const SpaceTimeGrid&, const SpaceTimeGrid&) = default;

private:
    double t_start_;
    double t_end_;
    std::size_t nt_;
    double radius_;
    std::size_t nx_;
    int dim_;
    double dt_;
    double h_;
};

SpaceTimeGrid make_grid(double t_start, double t_end, std::size_t nt, double radius, std::size_t nx, int dim);

/// Immutable real values on every node of a grid, stored row-major
/// (time layer, then space). Construction rejects NaN/Inf.
class ScalarField {
public:
    ScalarField(SpaceTimeGrid grid, std::vector<double> values);

    static ScalarField sample(const SpaceTimeGrid& grid, const std::function<double(double t, double x)>& fn);
    static ScalarField constant(const SpaceTimeGrid& grid, double value);

    const SpaceTimeGrid& grid() const { return grid_; }
    double operator()(std::size_t n, std::size_t i) const { return values_[grid_.index(n, i)]; }
    std::span<const double> values() const { return values_; }
    std::span<const double> layer(std::size_t n) const;

    /// Pointwise image under fn.
    ScalarField map(const std::function<double(double)>& fn) const;

    double max_abs() const;

private:
    SpaceTimeGrid grid_;
    std::vector<double> values_;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& f);
ScalarField pointwise_product(const ScalarField& a, const ScalarField& b);

class RegionMask {
public:
    RegionMask(SpaceTimeGrid grid, std::vector<char> inside);

    static RegionMask full(const SpaceTimeGrid& grid);
    static RegionMask where(const SpaceTimeGrid& grid, const std::function<bool(std::size_t n, std::size_t i)>& pred);

    const SpaceTimeGrid& grid() const { return grid_; }
    bool contains(std::size_t n, std::size_t i) const { return inside_[grid_.index(n, i)] != 0; }
    std::size_t count() const;
    bool empty() const { return count() == 0; }
    bool subset_of(const RegionMask& other) const;

    RegionMask operator|(const RegionMask& other) const;
    RegionMask operator&(const RegionMask& other) const;

    /// Linear node indices inside the region, in storage order.
    std::vector<std::size_t> nodes() const;

private:
    SpaceTimeGrid grid_;
    std::vector<char> inside_;
};

enum class LevelSide { AtLeast, AtMostNegative };

/// {f >= k} for LevelSide::AtLeast, {f <= -k} otherwise. Requires k > 0.
RegionMask superlevel_mask(const ScalarField& f, double k, LevelSide side = LevelSide::AtLeast);

// Second-order stencils on the full grid. Boundary time layers and the outer
// spatial nodes use one-sided second-order differences.
ScalarField discrete_time_derivative(const ScalarField& f);
ScalarField discrete_gradient(const ScalarField& f);
ScalarField discrete_laplacian(const ScalarField& f);

/// div(D grad v) in flux form with arithmetic face averages of the nodal
/// diffusivity D. Outer spatial nodes copy the adjacent interior value.
ScalarField discrete_flux_divergence(const ScalarField& v, const ScalarField& diffusivity);

/// Trapezoidal integral of g(f) over one time layer, with the surface
/// weight |S^{d-1}| r^{d-1} in radial mode.
double layer_integral(const ScalarField& f, std::size_t n, const std::function<double(double)>& g);

void write_csv(std::ostream& os, const ScalarField& f);
/// Reads the `t,x,value` layout back; the grid is inferred from the
/// coordinates, which must be uniform and complete.
ScalarField read_csv(std::istream& is, int dim);

} // namespace pmt
