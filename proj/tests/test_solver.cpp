#include "pmt/error.hpp"
#include "pmt/solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace pmt;
using doctest::Approx;

namespace {

CoefficientFunction unit_diffusion()
{
    return CoefficientFunction::custom([](double) { return 1.0; }, nullptr, 0.5, 0.5, "heat");
}

std::vector<double> nodes(std::size_t nx, double R)
{
    std::vector<double> x(nx);
    for (std::size_t i = 0; i < nx; ++i) x[i] = -R + 2.0 * R * static_cast<double>(i) / static_cast<double>(nx - 1);
    return x;
}

double sup_error(const ScalarField& u, const BarenblattParams& p, std::size_t n)
{
    double e = 0.0;
    for (std::size_t i = 0; i < u.grid().nx(); ++i)
        e = std::max(e, std::abs(u(n, i) - barenblatt_value(p, u.grid().t(n), u.grid().x(i))));
    return e;
}

} // namespace

TEST_CASE("cfl step examples")
{
    PMEProblem heat(unit_diffusion(), 1.0, 21, 1, 0.0, 1.0, std::vector<double>(21, 0.0));
    CHECK(heat.h() == Approx(0.1));
    CHECK(cfl_dt(heat, heat.u0(), 0.1) == Approx(0.002));
    PMEProblem radial(unit_diffusion(), 1.0, 11, 3, 0.0, 1.0, std::vector<double>(11, 0.0));
    CHECK(cfl_dt(radial, radial.u0(), 0.1) == Approx(0.4 * 0.01 / 6.0));
    // a vanishes on the zero layer; the floor keeps the step finite.
    PMEProblem pme(CoefficientFunction::power_law(2.0), 1.0, 21, 1, 0.0, 1.0, std::vector<double>(21, 0.0));
    CHECK(std::isfinite(cfl_dt(pme, pme.u0(), 0.1)));
}

TEST_CASE("problem validation")
{
    const auto c = unit_diffusion();
    CHECK_THROWS_AS(PMEProblem(c, 0.0, 21, 1, 0.0, 1.0, std::vector<double>(21, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(PMEProblem(c, 1.0, 3, 1, 0.0, 1.0, std::vector<double>(3, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(PMEProblem(c, 1.0, 21, 1, 1.0, 1.0, std::vector<double>(21, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(PMEProblem(c, 1.0, 21, 1, 0.0, 1.0, std::vector<double>(20, 0.0)), std::invalid_argument);
    std::vector<double> bad(21, 0.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(PMEProblem(c, 1.0, 21, 1, 0.0, 1.0, bad), std::invalid_argument);
    // boundary data incompatible with u0 at t_start
    CHECK_THROWS_AS(PMEProblem(c, 1.0, 21, 1, 0.0, 1.0, std::vector<double>(21, 0.0),
                               [](double, double) { return 1.0; }),
                    std::invalid_argument);
}

TEST_CASE("constant state is steady")
{
    PMEProblem p(CoefficientFunction::power_law(2.0), 1.0, 21, 1, 0.0, 0.5, std::vector<double>(21, 0.7),
                 [](double, double) { return 0.7; });
    const auto u = solve(p, 6);
    for (double v : u.values()) CHECK(v == Approx(0.7).epsilon(1e-14));
}

TEST_CASE("zero data stay zero")
{
    PMEProblem p(CoefficientFunction::power_law(2.0), 2.0, 41, 1, 0.0, 1.0, std::vector<double>(41, 0.0));
    SolveStats stats;
    const auto u = solve(p, 5, &stats);
    CHECK(u.max_abs() == 0.0);
    CHECK(stats.steps > 0);
}

TEST_CASE("heat equation decay of a sine mode")
{
    const std::size_t nx = 81;
    const auto x = nodes(nx, 1.0);
    std::vector<double> u0(nx);
    for (std::size_t i = 0; i < nx; ++i) u0[i] = std::sin(std::numbers::pi * x[i]);
    u0.front() = u0.back() = 0.0;
    PMEProblem p(unit_diffusion(), 1.0, nx, 1, 0.0, 0.1, u0);
    CHECK_FALSE(p.uses_standard_form());
    const auto u = solve(p, 3);
    const double decay = std::exp(-std::numbers::pi * std::numbers::pi * 0.1);
    double err = 0.0;
    for (std::size_t i = 0; i < nx; ++i) err = std::max(err, std::abs(u(2, i) - decay * u0[i]));
    CHECK(err < 1e-3);
}

TEST_CASE("output times are hit exactly")
{
    auto p = PMEProblem::barenblatt({2.0, 1, 1.0, 0.0}, 6.0, 101, 1.0, 2.0);
    SolveStats stats;
    const auto u = solve(p, 11, &stats);
    CHECK(u.grid().t(0) == 1.0);
    CHECK(u.grid().t(10) == Approx(2.0).epsilon(1e-15));
    CHECK(stats.min_dt > 0.0);
    // max a(u) only decreases along the run, so the last layer admits the largest step.
    const auto last = u.layer(10);
    CHECK(stats.max_dt <= cfl_dt(p, {last.begin(), last.end()}, p.h()) * (1.0 + 1e-12));
}

TEST_CASE("Barenblatt convergence")
{
    const BarenblattParams bp{2.0, 1, 1.0, 0.0};
    double prev = 0.0;
    for (std::size_t nx : {101u, 201u}) {
        const auto u = solve(PMEProblem::barenblatt(bp, 6.0, nx, 1.0, 2.0), 11);
        const double e = sup_error(u, bp, 10);
        MESSAGE("nx = " << nx << ": sup error " << e);
        CHECK(e <= 0.02);
        if (prev > 0.0) CHECK(prev / e >= 1.5);
        prev = e;
    }
}

TEST_CASE("radial Barenblatt stays close to the oracle")
{
    const BarenblattParams bp{2.0, 3, 1.0, 0.0};
    const auto u = solve(PMEProblem::barenblatt(bp, 4.0, 161, 1.0, 1.5), 6);
    CHECK(sup_error(u, bp, 5) <= 0.02);
}

TEST_CASE("maximum principle, conservation and finite speed")
{
    const BarenblattParams bp{2.0, 1, 1.0, 0.0};
    const auto u = solve(PMEProblem::barenblatt(bp, 6.0, 201, 1.0, 2.0), 21);
    const auto& g = u.grid();
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < g.nx(); ++i) {
        lo = std::min(lo, u(0, i));
        hi = std::max(hi, u(0, i));
    }
    for (double v : u.values()) {
        CHECK(v >= lo - 1e-14);
        CHECK(v <= hi + 1e-14);
    }
    const auto mass = [&](std::size_t n) { return layer_integral(u, n, [](double v) { return std::sqrt(std::abs(v)); }); };
    const double m0 = mass(0);
    for (std::size_t n = 1; n < g.nt(); ++n) CHECK(std::abs(mass(n) - m0) <= 1e-10 * m0);

    // Finite speed: beyond the analytic support plus one cell, values stay below h^2.
    double outside = 0.0;
    for (std::size_t n = 0; n < g.nt(); ++n)
        for (std::size_t i = 0; i < g.nx(); ++i)
            if (std::abs(g.x(i)) > support_radius(bp, g.t(n)) + g.h()) outside = std::max(outside, std::abs(u(n, i)));
    CHECK(outside <= g.h() * g.h());
}

TEST_CASE("explicit step rejects steps above the bound")
{
    auto p = PMEProblem::barenblatt({2.0, 1, 1.0, 0.0}, 6.0, 101, 1.0, 2.0);
    const double dt = cfl_dt(p, p.u0(), p.h());
    CHECK_NOTHROW(step_explicit(p.u0(), p, 1.0, dt));
    CHECK_THROWS_AS(step_explicit(p.u0(), p, 1.0, 1.01 * dt), std::invalid_argument);
}

TEST_CASE("layer laplacian")
{
    std::vector<double> sq(11);
    for (std::size_t i = 0; i < 11; ++i) sq[i] = std::pow(0.1 * static_cast<double>(i), 2);
    const auto lap3 = layer_laplacian(sq, 0.1, 3);
    CHECK(lap3[0] == Approx(6.0));
    CHECK(lap3[5] == Approx(6.0));
    CHECK(lap3[10] == 0.0);
}

TEST_CASE("compatibility check")
{
    auto ok = PMEProblem::barenblatt({2.0, 1, 1.0, 0.0}, 6.0, 101, 1.0, 2.0);
    const auto r = compatibility_check(ok, 0.5);
    CHECK(r.pass);
    CHECK(r.alpha == 0.5);

    // Support touching the boundary: traces taken from the oracle agree.
    const BarenblattParams wide{2.0, 1, 1.0, 0.0};
    auto touching = PMEProblem::barenblatt(wide, 2.0, 201, 1.0, 1.5);
    const auto t = compatibility_check(touching, 0.5);
    CHECK(t.nodes_checked == 2);
    CHECK(t.pass);

    // Frozen boundary values while the interior evolves.
    const auto x = nodes(201, 2.5);
    std::vector<double> u0(201);
    for (std::size_t i = 0; i < 201; ++i) u0[i] = barenblatt_value(wide, 1.0, x[i]);
    const double edge = u0.front();
    PMEProblem frozen(CoefficientFunction::power_law(2.0), 2.5, 201, 1, 1.0, 1.5, u0,
                      [edge](double, double) { return edge; });
    const auto f = compatibility_check(frozen, 0.5);
    CHECK_FALSE(f.pass);
    CHECK(f.max_defect > f.tolerance);

    // Steady state with a constant trace.
    PMEProblem steady(CoefficientFunction::power_law(2.0), 1.0, 21, 1, 0.0, 1.0, std::vector<double>(21, 0.3),
                      [](double, double) { return 0.3; });
    const auto st = compatibility_check(steady, 0.5);
    CHECK(st.pass);
    CHECK(st.max_defect == Approx(0.0));

    PMEProblem zero(CoefficientFunction::power_law(2.0), 1.0, 21, 1, 0.0, 1.0, std::vector<double>(21, 0.0));
    const auto z = compatibility_check(zero, 0.5);
    CHECK(z.pass);
    CHECK(z.max_defect == 0.0);
    CHECK(z.nodes_checked == 0);
}

TEST_CASE("heat step decreases the sup norm and halves with doubled diffusion")
{
    const std::size_t nx = 41;
    const auto x = nodes(nx, 1.0);
    std::vector<double> u0(nx);
    for (std::size_t i = 0; i < nx; ++i) u0[i] = std::cos(0.5 * std::numbers::pi * x[i]);
    u0.front() = u0.back() = 0.0;
    PMEProblem p(unit_diffusion(), 1.0, nx, 1, 0.0, 1.0, u0);
    const double dt = cfl_dt(p, u0, p.h());
    const auto next = step_explicit(u0, p, 0.0, dt);
    CHECK(*std::max_element(next.begin(), next.end()) < *std::max_element(u0.begin(), u0.end()));

    const auto doubled = CoefficientFunction::custom([](double) { return 2.0; }, nullptr, 0.5, 0.5);
    PMEProblem q(doubled, 1.0, nx, 1, 0.0, 1.0, u0);
    CHECK(cfl_dt(q, u0, q.h()) == Approx(0.5 * dt));
}
