#include "pmt/solver.hpp"

#include "pmt/error.hpp"
#include "pmt/keyvalue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pmt {

PMEProblem::PMEProblem(CoefficientFunction coeff, double radius, std::size_t nx, int dim, double t_start,
                       double t_end, std::vector<double> u0, BoundaryFn boundary)
    : coeff_(std::move(coeff)), radius_(radius), nx_(nx), dim_(dim), t_start_(t_start), t_end_(t_end),
      u0_(std::move(u0)), boundary_(std::move(boundary))
{
    if (!(radius > 0.0)) throw std::invalid_argument("problem: R must be > 0");
    if (nx < 5) throw std::invalid_argument("problem: nx must be >= 5");
    if (dim < 1) throw std::invalid_argument("problem: d must be >= 1");
    if (!(t_start >= 0.0 && t_end > t_start)) throw std::invalid_argument("problem: need t_end > t_start >= 0");
    if (u0_.size() != nx) throw std::invalid_argument("problem: u0 has the wrong length");
    for (double v : u0_)
        if (!std::isfinite(v)) throw std::invalid_argument("problem: u0 is not finite");
    h_ = (radial() ? radius : 2.0 * radius) / static_cast<double>(nx - 1);
    for (auto i : boundary_nodes()) {
        const double g = this->boundary(t_start, x(i));
        if (g != u0_[i])
            throw std::invalid_argument("problem: boundary data " + format_double(g) + " differs from u0 = " +
                                        format_double(u0_[i]) + " at x = " + format_double(x(i)));
    }
}

PMEProblem PMEProblem::barenblatt(const BarenblattParams& p, double radius, std::size_t nx, double t_start,
                                  double t_end)
{
    p.validate();
    const double h = (p.d > 1 ? radius : 2.0 * radius) / static_cast<double>(nx - 1);
    const double x0 = p.d > 1 ? 0.0 : -radius;
    std::vector<double> u0(nx);
    for (std::size_t i = 0; i < nx; ++i) u0[i] = barenblatt_value(p, t_start, x0 + static_cast<double>(i) * h);
    return PMEProblem(CoefficientFunction::power_law(p.m), radius, nx, p.d, t_start, t_end, std::move(u0),
                      [p](double t, double x) { return barenblatt_value(p, t, x); });
}

double PMEProblem::x(std::size_t i) const
{
    return (radial() ? 0.0 : -radius_) + static_cast<double>(i) * h_;
}

std::vector<std::size_t> PMEProblem::boundary_nodes() const
{
    if (radial()) return {nx_ - 1};
    return {0, nx_ - 1};
}

bool PMEProblem::uses_standard_form() const
{
    switch (scheme) {
    case SchemeKind::StandardForm:
        if (!coeff_.is_power_law()) throw std::invalid_argument("problem: standard-form scheme needs a power law");
        return true;
    case SchemeKind::NonDivergence:
        return false;
    case SchemeKind::Auto:
        break;
    }
    return coeff_.is_power_law();
}

double cfl_dt(const PMEProblem& problem, const std::vector<double>& layer, double h)
{
    double amax = 1e-12;
    for (double v : layer) {
        if (!std::isfinite(v)) throw NumericalError("cfl_dt: non-finite layer value");
        amax = std::max(amax, problem.coeff().a(v));
    }
    return problem.cfl_factor * h * h / (2.0 * problem.dim() * amax);
}

std::vector<double> layer_laplacian(const std::vector<double>& f, double h, int dim)
{
    const std::size_t nx = f.size();
    std::vector<double> lap(nx, 0.0);
    const double h2 = h * h;
    if (dim == 1) {
        for (std::size_t i = 1; i + 1 < nx; ++i) lap[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
        return lap;
    }
    lap[0] = dim * 2.0 * (f[1] - f[0]) / h2;
    for (std::size_t i = 1; i + 1 < nx; ++i) {
        const double r = static_cast<double>(i) * h;
        lap[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2 + (dim - 1) / r * (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    return lap;
}

namespace {

// (1/r^{d-1}) d_r (r^{d-1} d_r f) in flux form, so sum_i r_i^{d-1} lap_i vanishes
// up to boundary fluxes.
std::vector<double> conservative_laplacian(const std::vector<double>& f, double h, int dim)
{
    if (dim == 1) return layer_laplacian(f, h, dim);
    const std::size_t nx = f.size();
    std::vector<double> lap(nx, 0.0);
    const double h2 = h * h;
    lap[0] = dim * 2.0 * (f[1] - f[0]) / h2;
    for (std::size_t i = 1; i + 1 < nx; ++i) {
        const double ri = static_cast<double>(i);
        const double wp = std::pow((ri + 0.5) / ri, dim - 1);
        const double wm = std::pow((ri - 0.5) / ri, dim - 1);
        lap[i] = (wp * (f[i + 1] - f[i]) - wm * (f[i] - f[i - 1])) / h2;
    }
    return lap;
}

} // namespace

std::vector<double> step_explicit(const std::vector<double>& layer, const PMEProblem& problem, double t, double dt)
{
    if (layer.size() != problem.nx()) throw std::invalid_argument("step: layer has the wrong length");
    const double h = problem.h();
    const double limit = cfl_dt(problem, layer, h);
    if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12))
        throw std::invalid_argument("step: dt = " + format_double(dt) + " violates the CFL bound " +
                                    format_double(limit));

    const auto& coeff = problem.coeff();
    std::vector<double> next(layer.size());
    if (problem.uses_standard_form()) {
        const double m = coeff.m();
        const auto lap = conservative_laplacian(layer, h, problem.dim());
        for (std::size_t i = 0; i < layer.size(); ++i)
            next[i] = from_standard_form(to_standard_form(layer[i], m) + dt * lap[i], m);
    } else {
        const auto lap = layer_laplacian(layer, h, problem.dim());
        for (std::size_t i = 0; i < layer.size(); ++i)
            next[i] = layer[i] + dt * (coeff.a(layer[i]) * lap[i] + coeff.f(layer[i]));
    }
    for (auto i : problem.boundary_nodes()) next[i] = problem.boundary(t + dt, problem.x(i));
    for (std::size_t i = 0; i < next.size(); ++i)
        if (!std::isfinite(next[i]))
            throw NumericalError("step: non-finite value at x = " + format_double(problem.x(i)) + ", t = " +
                                 format_double(t + dt) + " (unstable step)");
    return next;
}

ScalarField solve(const PMEProblem& problem, std::size_t nt_output, SolveStats* stats)
{
    const SpaceTimeGrid grid(problem.t_start(), problem.t_end(), nt_output, problem.radius(), problem.nx(),
                             problem.dim());
    std::vector<double> values;
    values.reserve(grid.size());
    values.insert(values.end(), problem.u0().begin(), problem.u0().end());

    SolveStats st;
    st.min_dt = std::numeric_limits<double>::infinity();
    std::vector<double> layer = problem.u0();
    double t = problem.t_start();
    for (std::size_t n = 1; n < nt_output; ++n) {
        const double target = grid.t(n);
        while (t < target) {
            double dt = cfl_dt(problem, layer, problem.h());
            bool last = false;
            if (t + dt >= target) {
                dt = target - t;
                last = true;
            }
            try {
                layer = step_explicit(layer, problem, t, dt);
            } catch (const NumericalError& e) {
                throw NumericalError(std::string("solve failed at t = ") + format_double(t) + ": " + e.what());
            }
            t = last ? target : t + dt;
            ++st.steps;
            st.min_dt = std::min(st.min_dt, dt);
            st.max_dt = std::max(st.max_dt, dt);
        }
        values.insert(values.end(), layer.begin(), layer.end());
    }
    if (stats) *stats = st;
    return ScalarField(grid, std::move(values));
}

CompatibilityReport compatibility_check(const PMEProblem& problem, double alpha)
{
    CompatibilityReport rep;
    rep.alpha = alpha;
    const auto& u0 = problem.u0();
    const double h = problem.h();
    const double dt = std::min(cfl_dt(problem, u0, h), problem.t_end() - problem.t_start());
    rep.tolerance = 10.0 * (h * h + dt);
    for (auto i : problem.boundary_nodes()) {
        if (u0[i] == 0.0) continue;
        // One-sided second differences pointing into the domain.
        const int dir = i == 0 ? 1 : -1;
        auto at = [&](int k) { return u0[static_cast<std::size_t>(static_cast<long>(i) + dir * k)]; };
        double lap = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h);
        if (problem.radial()) {
            const double r = problem.x(i);
            const double dr = -dir * (3.0 * at(0) - 4.0 * at(1) + at(2)) / (2.0 * h);
            lap += (problem.dim() - 1) / r * dr;
        }
        const double lhs = problem.coeff().a(u0[i]) * lap + problem.coeff().f(u0[i]);
        const double t0 = problem.t_start();
        const double rhs = (problem.boundary(t0 + dt, problem.x(i)) - problem.boundary(t0, problem.x(i))) / dt;
        rep.max_defect = std::max(rep.max_defect, std::abs(lhs - rhs));
        ++rep.nodes_checked;
    }
    rep.pass = rep.max_defect <= rep.tolerance;
    return rep;
}

} // namespace pmt
