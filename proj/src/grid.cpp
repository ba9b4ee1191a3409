#include "pmt/grid.hpp"

#include "pmt/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pmt {

SpaceTimeGrid::SpaceTimeGrid(double t_start, double t_end, std::size_t nt, double radius, std::size_t nx, int dim)
    : t_start_(t_start), t_end_(t_end), nt_(nt), radius_(radius), nx_(nx), dim_(dim)
{
    if (nt < 3) throw std::invalid_argument("grid: nt must be >= 3");
    if (nx < 5) throw std::invalid_argument("grid: nx must be >= 5");
    if (!(t_start >= 0.0)) throw std::invalid_argument("grid: t_start must be >= 0");
    if (!(t_end > t_start)) throw std::invalid_argument("grid: t_end must exceed t_start");
    if (!(radius > 0.0)) throw std::invalid_argument("grid: R must be > 0");
    if (dim < 1) throw std::invalid_argument("grid: dimension must be >= 1");
    dt_ = (t_end - t_start) / static_cast<double>(nt - 1);
    const double extent = dim == 1 ? 2.0 * radius : radius;
    h_ = extent / static_cast<double>(nx - 1);
}

SpaceTimeGrid make_grid(double t_start, double t_end, std::size_t nt, double radius, std::size_t nx, int dim)
{
    return SpaceTimeGrid(t_start, t_end, nt, radius, nx, dim);
}

ScalarField::ScalarField(SpaceTimeGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.size())
        throw std::invalid_argument("field: value count does not match grid shape");
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            const std::size_t n = k / grid_.nx(), i = k % grid_.nx();
            throw NumericalError("field: non-finite value at t=" + std::to_string(grid_.t(n)) +
                                 ", x=" + std::to_string(grid_.x(i)));
        }
    }
}

ScalarField ScalarField::sample(const SpaceTimeGrid& grid, const std::function<double(double, double)>& fn)
{
    std::vector<double> v(grid.size());
    for (std::size_t n = 0; n < grid.nt(); ++n)
        for (std::size_t i = 0; i < grid.nx(); ++i)
            v[grid.index(n, i)] = fn(grid.t(n), grid.x(i));
    return ScalarField(grid, std::move(v));
}

ScalarField ScalarField::constant(const SpaceTimeGrid& grid, double value)
{
    return ScalarField(grid, std::vector<double>(grid.size(), value));
}

std::span<const double> ScalarField::layer(std::size_t n) const
{
    return std::span<const double>(values_).subspan(n * grid_.nx(), grid_.nx());
}

ScalarField ScalarField::map(const std::function<double(double)>& fn) const
{
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), fn);
    return ScalarField(grid_, std::move(v));
}

double ScalarField::max_abs() const
{
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

namespace {

void require_same_grid(const ScalarField& a, const ScalarField& b)
{
    if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
}

ScalarField combine(const ScalarField& a, const ScalarField& b, double (*op)(double, double))
{
    require_same_grid(a, b);
    std::vector<double> v(a.values().size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = op(a.values()[k], b.values()[k]);
    return ScalarField(a.grid(), std::move(v));
}

} // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b)
{
    return combine(a, b, [](double x, double y) { return x + y; });
}

ScalarField operator-(const ScalarField& a, const ScalarField& b)
{
    return combine(a, b, [](double x, double y) { return x - y; });
}

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b)
{
    return combine(a, b, [](double x, double y) { return x * y; });
}

ScalarField operator*(double c, const ScalarField& f)
{
    return f.map([c](double v) { return c * v; });
}

RegionMask::RegionMask(SpaceTimeGrid grid, std::vector<char> inside)
    : grid_(grid), inside_(std::move(inside))
{
    if (inside_.size() != grid_.size())
        throw std::invalid_argument("mask: shape does not match grid");
}

RegionMask RegionMask::full(const SpaceTimeGrid& grid)
{
    return RegionMask(grid, std::vector<char>(grid.size(), 1));
}

RegionMask RegionMask::where(const SpaceTimeGrid& grid, const std::function<bool(std::size_t, std::size_t)>& pred)
{
    std::vector<char> in(grid.size());
    for (std::size_t n = 0; n < grid.nt(); ++n)
        for (std::size_t i = 0; i < grid.nx(); ++i)
            in[grid.index(n, i)] = pred(n, i) ? 1 : 0;
    return RegionMask(grid, std::move(in));
}

std::size_t RegionMask::count() const
{
    return static_cast<std::size_t>(std::count(inside_.begin(), inside_.end(), char{1}));
}

bool RegionMask::subset_of(const RegionMask& other) const
{
    if (!(grid_ == other.grid_)) throw std::invalid_argument("masks live on different grids");
    for (std::size_t k = 0; k < inside_.size(); ++k)
        if (inside_[k] && !other.inside_[k]) return false;
    return true;
}

RegionMask RegionMask::operator|(const RegionMask& other) const
{
    if (!(grid_ == other.grid_)) throw std::invalid_argument("masks live on different grids");
    std::vector<char> in(inside_.size());
    for (std::size_t k = 0; k < in.size(); ++k) in[k] = (inside_[k] || other.inside_[k]) ? 1 : 0;
    return RegionMask(grid_, std::move(in));
}

RegionMask RegionMask::operator&(const RegionMask& other) const
{
    if (!(grid_ == other.grid_)) throw std::invalid_argument("masks live on different grids");
    std::vector<char> in(inside_.size());
    for (std::size_t k = 0; k < in.size(); ++k) in[k] = (inside_[k] && other.inside_[k]) ? 1 : 0;
    return RegionMask(grid_, std::move(in));
}

std::vector<std::size_t> RegionMask::nodes() const
{
    std::vector<std::size_t> out;
    out.reserve(count());
    for (std::size_t k = 0; k < inside_.size(); ++k)
        if (inside_[k]) out.push_back(k);
    return out;
}

RegionMask superlevel_mask(const ScalarField& f, double k, LevelSide side)
{
    if (!(k > 0.0)) throw std::invalid_argument("superlevel_mask: threshold k must be > 0");
    std::vector<char> in(f.values().size());
    for (std::size_t j = 0; j < in.size(); ++j) {
        const double v = f.values()[j];
        in[j] = (side == LevelSide::AtLeast ? v >= k : v <= -k) ? 1 : 0;
    }
    return RegionMask(f.grid(), std::move(in));
}

ScalarField discrete_time_derivative(const ScalarField& f)
{
    const auto& g = f.grid();
    const std::size_t nt = g.nt(), nx = g.nx();
    const double inv2dt = 1.0 / (2.0 * g.dt());
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < nx; ++i) {
        out[g.index(0, i)] = (-3.0 * f(0, i) + 4.0 * f(1, i) - f(2, i)) * inv2dt;
        for (std::size_t n = 1; n + 1 < nt; ++n)
            out[g.index(n, i)] = (f(n + 1, i) - f(n - 1, i)) * inv2dt;
        out[g.index(nt - 1, i)] = (3.0 * f(nt - 1, i) - 4.0 * f(nt - 2, i) + f(nt - 3, i)) * inv2dt;
    }
    return ScalarField(g, std::move(out));
}

namespace {

// d/dx on one layer; the radial origin uses the even reflection f(-h) = f(h).
void layer_gradient(const SpaceTimeGrid& g, std::span<const double> f, std::span<double> out)
{
    const std::size_t nx = g.nx();
    const double inv2h = 1.0 / (2.0 * g.h());
    out[0] = g.radial() ? 0.0 : (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
    for (std::size_t i = 1; i + 1 < nx; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2h;
    out[nx - 1] = (3.0 * f[nx - 1] - 4.0 * f[nx - 2] + f[nx - 3]) * inv2h;
}

void layer_laplacian(const SpaceTimeGrid& g, std::span<const double> f, std::span<double> out)
{
    const std::size_t nx = g.nx();
    const double h = g.h();
    const double invh2 = 1.0 / (h * h);
    const double dm1 = static_cast<double>(g.dim() - 1);
    auto one_sided_dd_last = [&] {
        return (2.0 * f[nx - 1] - 5.0 * f[nx - 2] + 4.0 * f[nx - 3] - f[nx - 4]) * invh2;
    };
    if (!g.radial()) {
        out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * invh2;
        for (std::size_t i = 1; i + 1 < nx; ++i) out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * invh2;
        out[nx - 1] = one_sided_dd_last();
        return;
    }
    out[0] = static_cast<double>(g.dim()) * 2.0 * (f[1] - f[0]) * invh2;
    for (std::size_t i = 1; i + 1 < nx; ++i) {
        const double r = g.x(i);
        const double frr = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * invh2;
        const double fr = (f[i + 1] - f[i - 1]) / (2.0 * h);
        out[i] = frr + dm1 / r * fr;
    }
    const double fr_last = (3.0 * f[nx - 1] - 4.0 * f[nx - 2] + f[nx - 3]) / (2.0 * h);
    out[nx - 1] = one_sided_dd_last() + dm1 / g.x(nx - 1) * fr_last;
}

template <class LayerOp>
ScalarField per_layer(const ScalarField& f, LayerOp op)
{
    const auto& g = f.grid();
    std::vector<double> out(g.size());
    for (std::size_t n = 0; n < g.nt(); ++n)
        op(g, f.layer(n), std::span<double>(out).subspan(n * g.nx(), g.nx()));
    return ScalarField(g, std::move(out));
}

} // namespace

ScalarField discrete_gradient(const ScalarField& f)
{
    return per_layer(f, layer_gradient);
}

ScalarField discrete_laplacian(const ScalarField& f)
{
    return per_layer(f, layer_laplacian);
}

ScalarField discrete_flux_divergence(const ScalarField& v, const ScalarField& diffusivity)
{
    require_same_grid(v, diffusivity);
    const auto& g = v.grid();
    const std::size_t nx = g.nx();
    const double h = g.h();
    const int d = g.dim();
    std::vector<double> out(g.size());
    std::vector<double> flux(nx - 1); // flux[i] lives on face i+1/2
    for (std::size_t n = 0; n < g.nt(); ++n) {
        const auto vv = v.layer(n);
        const auto dd = diffusivity.layer(n);
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            double f = 0.5 * (dd[i] + dd[i + 1]) * (vv[i + 1] - vv[i]) / h;
            if (g.radial()) f *= std::pow(g.x(i) + 0.5 * h, d - 1);
            flux[i] = f;
        }
        double* row = out.data() + n * nx;
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            double div = (flux[i] - flux[i - 1]) / h;
            if (g.radial()) div /= std::pow(g.x(i), d - 1);
            row[i] = div;
        }
        if (g.radial()) {
            // r = 0: F(-h/2) = -F(h/2) by symmetry, and r^{d-1} weights cancel in the limit.
            row[0] = 2.0 * d * (0.5 * (dd[0] + dd[1]) * (vv[1] - vv[0]) / h) / h;
        } else {
            row[0] = row[1];
        }
        row[nx - 1] = row[nx - 2];
    }
    return ScalarField(g, std::move(out));
}

double layer_integral(const ScalarField& f, std::size_t n, const std::function<double(double)>& g)
{
    const auto& grid = f.grid();
    const auto row = f.layer(n);
    const int d = grid.dim();
    // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
    const double surface = grid.radial() ? 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d) : 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.nx(); ++i) {
        double w = (i == 0 || i + 1 == grid.nx()) ? 0.5 : 1.0;
        if (grid.radial()) w *= surface * std::pow(grid.x(i), d - 1);
        sum += w * g(row[i]);
    }
    return sum * grid.h();
}

void write_csv(std::ostream& os, const ScalarField& f)
{
    const auto& g = f.grid();
    os << "t,x,value\n";
    char buf[96];
    for (std::size_t n = 0; n < g.nt(); ++n) {
        for (std::size_t i = 0; i < g.nx(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.t(n), g.x(i), f(n, i));
            os << buf;
        }
    }
}

ScalarField read_csv(std::istream& is, int dim)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("t,x,value", 0) != 0)
        throw std::invalid_argument("field csv: missing `t,x,value` header");
    std::vector<double> vals;
    std::vector<double> times, positions;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double t = 0, x = 0, v = 0;
        char c1 = 0, c2 = 0;
        if (!(row >> t >> c1 >> x >> c2 >> v) || c1 != ',' || c2 != ',')
            throw std::invalid_argument("field csv: malformed row `" + line + "`");
        if (times.empty() || times.back() != t) times.push_back(t);
        if (times.size() == 1) positions.push_back(x);
        vals.push_back(v);
    }
    if (times.size() < 3 || positions.size() < 5 || vals.size() != times.size() * positions.size())
        throw std::invalid_argument("field csv: rows do not form a complete tensor grid");
    const double radius = dim == 1 ? -positions.front() : positions.back();
    SpaceTimeGrid grid(times.front(), times.back(), times.size(), radius, positions.size(), dim);
    const double tol = 1e-9 * std::max(1.0, radius);
    for (std::size_t i = 0; i < positions.size(); ++i)
        if (std::abs(positions[i] - grid.x(i)) > tol)
            throw std::invalid_argument("field csv: spatial nodes are not uniform on the expected domain");
    for (std::size_t n = 0; n < times.size(); ++n)
        if (std::abs(times[n] - grid.t(n)) > 1e-9 * std::max(1.0, grid.t_end()))
            throw std::invalid_argument("field csv: time nodes are not uniform");
    return ScalarField(grid, std::move(vals));
}

} // namespace pmt
