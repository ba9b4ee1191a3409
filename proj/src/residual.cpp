#include "pmt/residual.hpp"

#include "pmt/error.hpp"
#include "pmt/keyvalue.hpp"
#include "pmt/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <stdexcept>
#include <thread>

namespace pmt {

namespace {

double sgn(double x)
{
    return (x > 0.0) - (x < 0.0);
}

double central_derivative(const std::function<double(double)>& fn, double x, double lo, double hi)
{
    const double step = 1e-5 * std::max(std::abs(x), 1e-3);
    const double a = std::max(lo, x - step), b = std::min(hi, x + step);
    return (fn(b) - fn(a)) / (b - a);
}

double V_second(const TransformSpec& spec, double u)
{
    if (spec.mode() == TransformMode::ClosedForm) {
        const auto& f = spec.formulas();
        return sgn(u) * f.v_exp * (f.v_exp - 1.0) * std::pow(std::abs(u), f.v_exp - 2.0);
    }
    return central_derivative([&](double k) { return spec.V_prime(k); }, u, -spec.M(), spec.M());
}

double diffusion_derivative(const TransformSpec& spec, double v)
{
    if (spec.mode() == TransformMode::ClosedForm) {
        const auto& f = spec.formulas();
        return sgn(v) * f.diffusion_coef * f.diffusion_exp * std::pow(std::abs(v), f.diffusion_exp - 1.0);
    }
    const auto [lo, hi] = spec.v_range();
    return central_derivative([&](double w) { return spec.diffusion(w); }, v, lo, hi);
}

double region_sup(const ScalarField& f, const RegionMask& region)
{
    double m = 0.0;
    for (auto k : region.nodes()) m = std::max(m, std::abs(f.values()[k]));
    return m;
}

ResidualReport make_report(ScalarField field, const RegionMask& region, const ResidualOptions& opts,
                           std::string tag)
{
    ResidualReport rep{std::move(field), region, 0.0, std::nullopt, {}, {}};
    rep.sup_norm = region_sup(rep.field, region);
    if (opts.residual_holder && !region.empty())
        rep.holder = holder_seminorm(rep.field, opts.alpha, region, opts.holder);
    rep.tag = std::move(tag);
    return rep;
}

void add_term(ResidualReport& rep, const char* name, const ScalarField& term, const ResidualOptions& opts)
{
    if (!opts.term_holders || rep.region.empty()) return;
    rep.terms.emplace_back(name, holder_seminorm(term, opts.alpha, rep.region, opts.holder));
}

std::string grid_tag(const SpaceTimeGrid& g)
{
    return "nt=" + std::to_string(g.nt()) + ",nx=" + std::to_string(g.nx());
}

} // namespace

PointResidual identity_residual_analytic(const BarenblattParams& p, const TransformSpec& spec,
                                         const std::vector<std::pair<double, double>>& points)
{
    p.validate();
    if (spec.coeff().is_power_law() && std::abs(spec.coeff().m() - p.m) > 1e-12)
        throw std::invalid_argument("identity residual: spec and Barenblatt parameters use different m");
    PointResidual out;
    out.points = points;
    for (const auto& [t, x] : points) {
        if (!(std::abs(x) < support_radius(p, t)))
            throw std::invalid_argument("identity residual: point (" + format_double(t) + ", " + format_double(x) +
                                        ") is not strictly inside the support");
        const double u = barenblatt_value(p, t, x);
        const auto d = barenblatt_derivatives(p, t, x);
        const double grad2 = d.dx * d.dx;
        const double fbar = spec.fbar(u, grad2);

        const double dt_v = spec.V_prime(u) * d.dt;
        const double lap_Phi = spec.Phi_second(u) * grad2 + spec.Phi_prime(u) * d.lap;
        const double r1 = dt_v - lap_Phi - fbar;

        const double v = spec.V(u);
        const double vp = spec.V_prime(u);
        const double lap_v = V_second(spec, u) * grad2 + vp * d.lap;
        const double div_flux = diffusion_derivative(spec, v) * vp * vp * grad2 + spec.diffusion(v) * lap_v;
        const double r2 = dt_v - div_flux - fbar;

        out.divergence_free.push_back(r1);
        out.divergence_form.push_back(r2);
        out.sup_norm = std::max({out.sup_norm, std::abs(r1), std::abs(r2)});
    }
    return out;
}

std::vector<std::pair<double, double>> random_interior_points(const BarenblattParams& p, std::size_t count,
                                                              double t0, double t1, std::uint64_t seed,
                                                              double margin)
{
    if (!(t1 >= t0 && t0 + p.tau > 0.0)) throw std::invalid_argument("random points: bad time window");
    if (!(margin > 0.0 && margin < 1.0)) throw std::invalid_argument("random points: margin must lie in (0, 1)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double t = t0 + (t1 - t0) * unit(rng);
        const double rho = margin * support_radius(p, t);
        const double x = p.d > 1 ? rho * unit(rng) : rho * (2.0 * unit(rng) - 1.0);
        pts.emplace_back(t, x);
    }
    return pts;
}

ResidualReport residual_original(const ScalarField& u, const CoefficientFunction& coeff, const RegionMask& region,
                                 const ResidualOptions& opts)
{
    const auto dtu = discrete_time_derivative(u);
    const auto lap = discrete_laplacian(u);
    const auto a_u = u.map([&](double x) { return coeff.a(x); });
    const auto a_lap = pointwise_product(a_u, lap);
    auto field = dtu - a_lap;
    if (!coeff.reaction_free()) field = field - u.map([&](double x) { return coeff.f(x); });
    auto rep = make_report(std::move(field), region, opts, "original " + grid_tag(u.grid()));
    add_term(rep, "dt_u", dtu, opts);
    add_term(rep, "a_lap_u", a_lap, opts);
    return rep;
}

ScalarField apply_transform(const ScalarField& u, const TransformSpec& spec)
{
    return u.map([&](double x) { return spec.V(x); });
}

ScalarField discrete_fbar(const ScalarField& u, const TransformSpec& spec, FbarDiscretization kind)
{
    const auto& g = u.grid();
    std::vector<double> out(g.size());
    const auto uu = u.values();
    if (kind == FbarDiscretization::GradientPotential) {
        const auto grad_G = discrete_gradient(u.map([&](double x) { return spec.gradient_potential(x); }));
        const auto gg = grad_G.values();
        for (std::size_t k = 0; k < out.size(); ++k) {
            const double react = spec.reaction_term(uu[k]);
            const double sign = sgn(spec.fbar(uu[k], 1.0) - react);
            out[k] = sign * gg[k] * gg[k] + react;
        }
    } else {
        const auto grad_u = discrete_gradient(u);
        const auto gu = grad_u.values();
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = spec.fbar(uu[k], gu[k] * gu[k]);
    }
    return ScalarField(g, std::move(out));
}

ResidualReport residual_transformed(const ScalarField& v, const TransformSpec& spec, const RegionMask& region,
                                    const ResidualOptions& opts, const ScalarField* u)
{
    const auto [lo, hi] = spec.v_range();
    const double slack = 1e-12 * std::max(std::abs(lo), std::abs(hi));
    for (double w : v.values())
        if (w < lo - slack || w > hi + slack)
            throw std::invalid_argument("residual_transformed: v = " + format_double(w) + " outside the range of V");
    std::optional<ScalarField> recovered;
    if (!u) {
        recovered = v.map([&](double w) { return spec.U(w); });
        u = &*recovered;
    }
    if (!(u->grid() == v.grid())) throw std::invalid_argument("residual_transformed: u and v live on different grids");

    const auto dtv = discrete_time_derivative(v);
    const auto flux = discrete_flux_divergence(v, v.map([&](double w) { return spec.diffusion(w); }));
    const auto fbar = discrete_fbar(*u, spec, opts.fbar);
    auto rep = make_report(dtv - flux - fbar, region, opts, "transformed " + grid_tag(v.grid()));
    add_term(rep, "dt_v", dtv, opts);
    add_term(rep, "div_flux", flux, opts);
    add_term(rep, "fbar", fbar, opts);
    return rep;
}

ResidualReport residual_divergence_free(const ScalarField& u, const TransformSpec& spec, const RegionMask& region,
                                        const ResidualOptions& opts)
{
    const auto dtv = discrete_time_derivative(apply_transform(u, spec));
    const auto lap_Phi = discrete_laplacian(u.map([&](double x) { return spec.Phi(x); }));
    const auto fbar = discrete_fbar(u, spec, opts.fbar);
    auto rep = make_report(dtv - lap_Phi - fbar, region, opts, "divergence-free " + grid_tag(u.grid()));
    add_term(rep, "dt_v", dtv, opts);
    add_term(rep, "lap_Phi", lap_Phi, opts);
    add_term(rep, "fbar", fbar, opts);
    return rep;
}

RegionMask interface_band(const SpaceTimeGrid& grid, const BarenblattParams& p, double cells)
{
    std::vector<double> rho(grid.nt());
    for (std::size_t n = 0; n < grid.nt(); ++n) rho[n] = support_radius(p, grid.t(n));
    const double width = cells * grid.h();
    return RegionMask::where(grid, [&](std::size_t n, std::size_t i) {
        return std::abs(std::abs(grid.x(i)) - rho[n]) <= width;
    });
}

RegionMask support_interior(const SpaceTimeGrid& grid, const BarenblattParams& p, double cells)
{
    std::vector<double> rho(grid.nt());
    for (std::size_t n = 0; n < grid.nt(); ++n) rho[n] = support_radius(p, grid.t(n));
    const double width = cells * grid.h();
    return RegionMask::where(grid, [&](std::size_t n, std::size_t i) { return std::abs(grid.x(i)) <= rho[n] - width; });
}

// ---------------------------------------------------------------------------
// Refinement study

std::size_t cfl_matched_nt(const Scenario& s, std::size_t nx)
{
    s.validate();
    const double h = (s.params.d > 1 ? s.radius : 2.0 * s.radius) / static_cast<double>(nx - 1);
    // Barenblatt peaks at the origin at the earliest time.
    const double umax = barenblatt_value(s.params, s.t_start, 0.0);
    const double amax = std::max(CoefficientFunction::power_law(s.params.m).a(umax), 1e-12);
    const double dt = 0.4 * h * h / (2.0 * s.params.d * amax);
    const auto steps = static_cast<std::size_t>(std::ceil((s.t_end - s.t_start) / dt * (1.0 - 1e-12)));
    return std::max<std::size_t>(steps + 1, 3);
}

std::vector<Level> cfl_levels(const Scenario& s, const std::vector<std::size_t>& nxs)
{
    std::vector<Level> out;
    for (auto nx : nxs) out.push_back({cfl_matched_nt(s, nx), nx});
    return out;
}

std::vector<Level> default_levels(const Scenario& s, std::size_t count)
{
    std::vector<std::size_t> nxs;
    std::size_t nx = 101;
    for (std::size_t j = 0; j < count; ++j, nx = 2 * nx - 1) nxs.push_back(nx);
    return cfl_levels(s, nxs);
}

ScalarField scenario_field(const Scenario& s, const Level& level)
{
    s.validate();
    const SpaceTimeGrid grid(s.t_start, s.t_end, level.nt, s.radius, level.nx, s.params.d);
    switch (s.source) {
    case ScenarioSource::Zero:
        return ScalarField::constant(grid, 0.0);
    case ScenarioSource::Solver:
        return solve(PMEProblem::barenblatt(s.params, s.radius, level.nx, s.t_start, s.t_end), level.nt);
    case ScenarioSource::Analytic:
        break;
    }
    const auto p = s.params;
    return ScalarField::sample(grid, [&p](double t, double x) { return barenblatt_value(p, t, x); });
}

namespace {

double band_max(const ScalarField& f, const RegionMask& band)
{
    return band.empty() ? 0.0 : region_sup(f, band);
}

StudyRow run_level(const Scenario& s, const Level& level, std::size_t index, const StudyOptions& opts)
{
    const auto start = std::chrono::steady_clock::now();
    StudyRow row;
    row.level = index;
    row.nt = level.nt;
    row.nx = level.nx;

    const auto u = scenario_field(s, level);
    const auto& grid = u.grid();
    const auto full = RegionMask::full(grid);
    const auto band = interface_band(grid, s.params, opts.band_cells);
    const auto interior = support_interior(grid, s.params, opts.band_cells);
    const auto coeff = CoefficientFunction::power_law(s.params.m);

    {
        const auto dtu = discrete_time_derivative(u);
        const auto lap = discrete_laplacian(u);
        const auto uu = u.values(), dd = dtu.values(), ll = lap.values();
        for (auto k : interior.nodes())
            row.sup_res_orig = std::max(row.sup_res_orig, std::abs(dd[k] - coeff.a(uu[k]) * ll[k]));
        row.semi_dtu = holder_seminorm(dtu, s.alpha, full, opts.holder).seminorm;
        row.semi_lap_u = holder_seminorm(lap, s.alpha, full, opts.holder).seminorm;
        row.band_lap_u = band_max(lap, band);
    }

    const double M = std::max(u.max_abs(), 1e-12) * (1.0 + 1e-9);
    const auto spec = make_powerlaw_spec(s.params.m, s.alpha, M);
    {
        const auto lap_Phi = discrete_laplacian(u.map([&](double x) { return spec.Phi(x); }));
        row.semi_lap_Phi = holder_seminorm(lap_Phi, s.alpha, full, opts.holder).seminorm;
        row.band_lap_Phi = band_max(lap_Phi, band);
    }
    {
        const auto v = apply_transform(u, spec);
        ResidualOptions ro;
        ro.alpha = s.alpha;
        ro.residual_holder = false;
        ro.term_holders = false;
        row.sup_res_trans = residual_transformed(v, spec, full, ro, &u).sup_norm;
        row.semi_dtv = holder_seminorm(discrete_time_derivative(v), s.alpha, full, opts.holder).seminorm;
    }
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

} // namespace

StudyTable convergence_study(const Scenario& s, const std::vector<Level>& levels, const StudyOptions& opts)
{
    s.validate();
    if (levels.size() < 3) throw std::invalid_argument("convergence_study: need at least 3 refinement levels");
    for (std::size_t j = 1; j < levels.size(); ++j)
        if (!(levels[j].nt > levels[j - 1].nt && levels[j].nx > levels[j - 1].nx))
            throw std::invalid_argument("convergence_study: levels must strictly refine in nt and nx");

    StudyTable table;
    table.rows.resize(levels.size());
    const auto jobs = static_cast<std::size_t>(std::clamp<int>(opts.jobs, 1, static_cast<int>(levels.size())));
    if (jobs == 1) {
        for (std::size_t j = 0; j < levels.size(); ++j) table.rows[j] = run_level(s, levels[j], j, opts);
        return table;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(levels.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (std::size_t j; (j = next.fetch_add(1)) < levels.size();) {
                try {
                    table.rows[j] = run_level(s, levels[j], j, opts);
                } catch (...) {
                    errors[j] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return table;
}

std::string StudyTable::render_csv(bool with_runtime) const
{
    std::string out = "level,nt,nx,sup_res_orig,sup_res_trans,semi_dtu,semi_lap_u,semi_dtv,semi_lap_Phi,runtime_s\n";
    for (const auto& r : rows) {
        out += std::to_string(r.level) + "," + std::to_string(r.nt) + "," + std::to_string(r.nx) + "," +
               format_double(r.sup_res_orig) + "," + format_double(r.sup_res_trans) + "," +
               format_double(r.semi_dtu) + "," + format_double(r.semi_lap_u) + "," + format_double(r.semi_dtv) +
               "," + format_double(r.semi_lap_Phi) + "," + format_double(with_runtime ? r.runtime_s : 0.0) + "\n";
    }
    return out;
}

std::string StudyTable::render_band_csv() const
{
    std::string out = "level,nx,band_lap_u,band_lap_Phi\n";
    for (const auto& r : rows)
        out += std::to_string(r.level) + "," + std::to_string(r.nx) + "," + format_double(r.band_lap_u) + "," +
               format_double(r.band_lap_Phi) + "\n";
    return out;
}

} // namespace pmt
