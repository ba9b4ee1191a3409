#include "pmt/barenblatt.hpp"
#include "pmt/grid.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace pmt;
using doctest::Approx;

namespace {
const BarenblattParams unit{2.0, 1, 1.0, 0.0};
}

TEST_CASE("barenblatt values")
{
    CHECK(barenblatt_value(unit, 1.0, 0.0) == Approx(1.0).epsilon(1e-15));
    CHECK(barenblatt_value(unit, 8.0, 0.0) == Approx(0.25).epsilon(1e-14));
    CHECK(barenblatt_value(unit, 1.0, 4.0) == 0.0);
    CHECK_THROWS_AS(barenblatt_value(unit, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(barenblatt_value(BarenblattParams{2, 1, 1, 0.5}, -0.5, 0.0), std::invalid_argument);
    // default time shift follows u(t, x) = B(t + 1, x)
    BarenblattParams shifted;
    CHECK(barenblatt_value(shifted, 7.0, 0.0) == Approx(0.25).epsilon(1e-14));
}

TEST_CASE("barenblatt parameter validation")
{
    CHECK_THROWS_AS((BarenblattParams{1.0, 1, 1, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BarenblattParams{2.0, 0, 1, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BarenblattParams{2.0, 1, 0, 0}.validate()), std::invalid_argument);
    CHECK(unit.outer_exponent() == Approx(2.0 / 3.0));
    CHECK(unit.inner_exponent() == Approx(2.0 / 3.0));
    CHECK(unit.kappa() == Approx(1.0 / 12.0));
}

TEST_CASE("barenblatt derivatives")
{
    CHECK(barenblatt_derivatives(unit, 1.0, 0.0).dx == 0.0);
    const auto d = barenblatt_derivatives(unit, 1.0, 1.0);
    const double u = barenblatt_value(unit, 1.0, 1.0);
    CHECK(std::abs(d.dt - 2.0 * std::sqrt(u) * d.lap) <= 1e-12);
    const auto out = barenblatt_derivatives(unit, 1.0, 4.0);
    CHECK(out.dt == 0.0);
    CHECK(out.dx == 0.0);
    CHECK(out.lap == 0.0);
}

TEST_CASE("analytic laplacian matches the discrete stencil to second order")
{
    double prev = 0.0;
    for (std::size_t nx : {201, 401}) {
        const auto g = make_grid(1.0, 1.1, 3, 6, nx, 1);
        const auto f = ScalarField::sample(g, [](double t, double x) { return barenblatt_value(unit, t, x); });
        const auto lap = discrete_laplacian(f);
        double err = 0.0;
        for (std::size_t i = 0; i < nx; ++i)
            if (std::abs(g.x(i)) < 3.0) err = std::max(err, std::abs(lap(0, i) - barenblatt_derivatives(unit, 1.0, g.x(i)).lap));
        CHECK(err < 10.0 * g.h() * g.h());
        if (prev > 0.0) CHECK(prev / err > 3.5);
        prev = err;
    }
}

TEST_CASE("support radius")
{
    CHECK(support_radius(unit, 1.0) == Approx(std::sqrt(12.0)).epsilon(1e-14));
    CHECK(support_radius(unit, 8.0) == Approx(2.0 * std::sqrt(12.0)).epsilon(1e-14));
    double prev = 0.0;
    for (double t = 0.5; t < 10.0; t += 0.5) {
        const double r = support_radius(unit, t);
        CHECK(r > prev);
        prev = r;
    }
    CHECK(barenblatt_value(unit, 1.0, support_radius(unit, 1.0)) <= 1e-30);
}

TEST_CASE("standard form substitution")
{
    CHECK(to_standard_form(0.0, 2.0) == 0.0);
    CHECK(to_standard_form(4.0, 2.0) == Approx(2.0).epsilon(1e-15));
    CHECK(from_standard_form(-3.0, 2.0) == -9.0);
    CHECK(to_standard_form(-9.0, 2.0) == Approx(-3.0).epsilon(1e-15));
    for (double m : {1.5, 2.0, 3.0})
        for (double s = -10.0; s <= 10.0; s += 0.01)
            CHECK(std::abs(to_standard_form(from_standard_form(s, m), m) - s) <= 1e-14 * std::max(1.0, std::abs(s)));
}

TEST_CASE("closed-form residual vanishes at random interior points")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (const auto& p : {unit, BarenblattParams{3.0, 1, 2.0, 0.5}, BarenblattParams{2.0, 3, 1.0, 1.0}}) {
        for (int j = 0; j < 500; ++j) {
            const double t = 0.5 + 3.0 * U(rng);
            const double x = 0.98 * support_radius(p, t) * (2.0 * U(rng) - 1.0);
            const double u = barenblatt_value(p, t, x);
            const auto d = barenblatt_derivatives(p, t, x);
            CHECK(std::abs(d.dt - p.m * std::pow(u, 1.0 - 1.0 / p.m) * d.lap) <= 1e-10 * (1.0 + std::abs(d.lap)));
        }
    }
}

TEST_CASE("barenblatt is nonnegative and vanishes outside the support")
{
    for (double t : {1.0, 2.0, 5.0})
        for (double x = -20.0; x <= 20.0; x += 0.05) {
            const double u = barenblatt_value(unit, t, x);
            CHECK(u >= 0.0);
            if (std::abs(x) >= support_radius(unit, t)) CHECK(u == 0.0);
        }
}

TEST_CASE("mass of the standard-form solution is conserved")
{
    CHECK(barenblatt_mass(unit) == Approx(8.0 * std::sqrt(3.0) / 3.0).epsilon(1e-12));
    const auto g = make_grid(1.0, 8.0, 8, 10, 4001, 1);
    const auto f = ScalarField::sample(g, [](double t, double x) { return barenblatt_value(unit, t, x); });
    for (std::size_t n = 0; n < g.nt(); ++n)
        CHECK(layer_integral(f, n, [](double u) { return std::sqrt(u); }) == Approx(barenblatt_mass(unit)).epsilon(g.h()));
    // radial mode uses the surface weight
    const BarenblattParams p3{2.0, 3, 1.0, 0.0};
    const auto g3 = make_grid(1.0, 2.0, 3, 6, 4001, 3);
    const auto f3 = ScalarField::sample(g3, [&](double t, double r) { return barenblatt_value(p3, t, r); });
    CHECK(layer_integral(f3, 0, [](double u) { return std::sqrt(u); }) == Approx(barenblatt_mass(p3)).epsilon(1e-3));
}
