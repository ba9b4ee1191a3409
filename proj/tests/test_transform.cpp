#include "pmt/transform.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace pmt;
using doctest::Approx;

namespace {

// a = 1000 |k| keeps the cap a^2 out of the way of polynomial moduli on [-1, 1]
// except on |k| < 1e-6.
CoefficientFunction wide()
{
    return CoefficientFunction::custom([](double k) { return 1e3 * std::abs(k); }, nullptr, 0.5, 0.5, "wide");
}

const TransformSpec& regenerated()
{
    // Phi'' of the closed form m = 2, alpha = 0.5 is 0.375 k^{-0.75}.
    static const auto spec =
        TransformSpec::quadrature(CoefficientFunction::power_law(2.0), 10.0, 0.999, PhiProfile::curvature(0.375, -0.75));
    return spec;
}

} // namespace

TEST_CASE("cap_phi")
{
    const auto a = [](double k) { return 2.0 * std::sqrt(std::abs(k)); };
    const auto a2 = [&](double k) { return a(k) * a(k); };
    const auto same = cap_phi(a2, a, 5.0);
    for (double k = -5; k <= 5; k += 0.25) CHECK(same(k) == Approx(a2(k)));
    const auto huge = cap_phi([](double k) { return k == 0.0 ? 0.0 : 1e6; }, a, 5.0);
    for (double k = -5; k <= 5; k += 0.25) CHECK(huge(k) == Approx(4.0 * std::abs(k)));
    CHECK(huge(0.0) == 0.0);
    CHECK_THROWS_AS(cap_phi([](double) { return 1.0; }, a, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(cap_phi([](double k) { return k; }, a, 5.0), std::invalid_argument);
}

TEST_CASE("closed-form Phi and derivatives")
{
    const auto s = make_powerlaw_spec(2.0, 0.5, 10.0);
    CHECK(s.Phi(0.0) == 0.0);
    CHECK(s.Phi_prime(0.0) == 0.0);
    CHECK(s.Phi_second(0.0) == 0.0);
    CHECK(s.Phi(1.0) == Approx(1.2).epsilon(1e-15));
    CHECK(s.Phi(-1.0) == Approx(-1.2).epsilon(1e-15));
    CHECK_THROWS_AS(s.Phi(10.5), std::invalid_argument);
    CHECK_THROWS_AS(s.V(-11.0), std::invalid_argument);
}

TEST_CASE("quadrature Phi matches polynomial oracles")
{
    const auto lin = TransformSpec::quadrature(wide(), 1.0, 0.5, PhiProfile::power(1.0, 1.0));
    CHECK(lin.Phi(0.0) == 0.0);
    CHECK(std::abs(lin.Phi(1.0) * 480.0 - 1.0) <= 1e-8);
    CHECK(std::abs(lin.Phi(-1.0) * 480.0 + 1.0) <= 1e-8);
    CHECK(std::abs(lin.Phi(0.5) / (std::pow(0.5, 6) / 480.0) - 1.0) <= 1e-8);
    CHECK(std::abs(lin.Phi_prime(0.5) / (std::pow(0.5, 5) / 80.0) - 1.0) <= 1e-8);
    CHECK(std::abs(lin.Phi_second(0.5) / (std::pow(0.5, 4) / 16.0) - 1.0) <= 1e-8);

    // phi(z) = z^2: inner y^3/12, squared y^6/144, then x^7/1008, then k^8/8064
    const auto sq = TransformSpec::quadrature(wide(), 1.0, 0.5, PhiProfile::power(1.0, 2.0));
    CHECK(std::abs(sq.Phi(1.0) * 8064.0 - 1.0) <= 1e-8);
    CHECK(std::abs(sq.Phi(0.7) / (std::pow(0.7, 8) / 8064.0) - 1.0) <= 1e-8);
}

TEST_CASE("V and U examples")
{
    const auto s = make_powerlaw_spec(2.0, 0.5, 20.0);
    CHECK(s.V(0.0) == 0.0);
    CHECK(s.V(16.0) == Approx(8.0).epsilon(1e-14));
    CHECK(s.U(0.0) == 0.0);
    CHECK(s.U(8.0) == Approx(16.0).epsilon(1e-14));
    CHECK(s.V_prime(0.0) == 0.0);
    CHECK_THROWS_AS(s.U(s.v_range().second * 1.01), std::invalid_argument);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> K(-20.0, 20.0);
    for (int j = 0; j < 100; ++j) {
        const double k = K(rng);
        CHECK(std::abs(s.U(s.V(k)) - k) <= 1e-10);
    }
    const auto q = TransformSpec::quadrature(CoefficientFunction::power_law(2.0), 3.0, 0.5);
    std::uniform_real_distribution<double> Kq(-3.0, 3.0);
    for (int j = 0; j < 100; ++j) {
        const double k = Kq(rng);
        CHECK(std::abs(q.U(q.V(k)) - k) <= 1e-10);
    }
}

TEST_CASE("quadrature agrees with the closed form on [0.1, 10]")
{
    const auto cf = make_powerlaw_spec(2.0, 0.5, 10.0);
    const auto& q = regenerated();
    for (double k = 0.1; k <= 10.0; k += 0.0991) {
        CHECK(std::abs(q.Phi(k) / cf.Phi(k) - 1.0) <= 1e-6);
        CHECK(std::abs(q.Phi_prime(k) / cf.Phi_prime(k) - 1.0) <= 1e-6);
        CHECK(std::abs(q.Phi_second(k) / cf.Phi_second(k) - 1.0) <= 1e-6);
        CHECK(std::abs(q.V(k) / cf.V(k) - 1.0) <= 1e-6);
        CHECK(std::abs(q.U(cf.V(k)) / k - 1.0) <= 1e-6);
    }
}

TEST_CASE("fbar examples")
{
    const auto s = make_powerlaw_spec(2.0, 0.5, 10.0);
    CHECK(s.fbar(1.0, 0.0) == 0.0);
    CHECK(s.fbar(0.0, 5.0) == 0.0);
    CHECK(s.fbar(1.0, 1.0) == Approx(-0.375).epsilon(1e-15));
    CHECK_THROWS_AS(s.fbar(1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(s.fbar(11.0, 1.0), std::invalid_argument);
    // Barenblatt scaling u ~ s^2, |grad u|^2 ~ s^2: fbar ~ s^alpha
    double prev = 1e300;
    for (double r = 0.1; r > 1e-6; r *= 0.5) {
        const double f = std::abs(s.fbar(r * r, r * r));
        CHECK(f == Approx(0.375 * std::pow(r, 0.5)).epsilon(1e-12));
        CHECK(f < prev);
        prev = f;
    }
}

TEST_CASE("transformed diffusion")
{
    const auto s = make_powerlaw_spec(2.0, 0.5, 20.0);
    CHECK(s.diffusion(0.0) == 0.0);
    CHECK(s.diffusion(8.0) == Approx(8.0).epsilon(1e-14));
    CHECK(s.diffusion(-8.0) == Approx(8.0).epsilon(1e-14));
    const auto q = TransformSpec::quadrature(CoefficientFunction::power_law(2.0), 3.0, 0.5);
    for (double v = -0.9; v <= 0.9; v += 0.1) {
        const auto [lo, hi] = q.v_range();
        const double w = v * hi;
        CHECK(std::abs(q.diffusion(w) - q.a(q.U(w))) <= 1e-10);
    }
}

TEST_CASE("make_powerlaw_spec")
{
    const auto s = make_powerlaw_spec(2.0, 0.5, 10.0);
    const auto& f = s.formulas();
    CHECK(f.v_exp == Approx(0.75));
    CHECK(f.phi_coef == Approx(1.2));
    CHECK(f.phi_exp == Approx(1.25));
    CHECK(f.fbar_coef == Approx(0.375));
    CHECK(f.fbar_exp == Approx(-0.75));
    CHECK(f.diffusion_exp == Approx(2.0 / 3.0));
    CHECK_THROWS_AS(make_powerlaw_spec(1.0, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_powerlaw_spec(2.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_powerlaw_spec(2.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_powerlaw_spec(2.0, 0.5, 0.0), std::invalid_argument);
    for (double m : {1.1, 2.0, 5.0})
        for (double al : {0.01, 0.5, 0.99}) {
            const auto sp = make_powerlaw_spec(m, al, 4.0);
            CHECK(sp.formulas().v_exp > 0.0);
            CHECK(sp.formulas().v_exp < 2.0);
            double prev = -1e300;
            for (double k = -4.0; k <= 4.0; k += 0.01) {
                CHECK(sp.V(k) > prev);
                prev = sp.V(k);
            }
        }
}

TEST_CASE("Phi' = a V'")
{
    const auto s = make_powerlaw_spec(2.0, 0.5, 10.0);
    const auto q = TransformSpec::quadrature(CoefficientFunction::power_law(2.0), 3.0, 0.5);
    for (double k = -10.0; k <= 10.0; k += 0.037) {
        const double lhs = s.Phi_prime(k), rhs = s.a(k) * s.V_prime(k);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
    for (double k = -3.0; k <= 3.0; k += 0.013) {
        const double lhs = q.Phi_prime(k), rhs = q.a(k) * q.V_prime(k);
        CHECK(std::abs(lhs - rhs) <= 1e-6 * std::max(1e-30, std::abs(lhs)));
    }
}

TEST_CASE("quadrature structure: flatness, monotonicity, V' bound, oddness")
{
    const double M = 2.0;
    const auto q = TransformSpec::quadrature(CoefficientFunction::power_law(2.0), M, 0.5);
    CHECK(q.Phi(0.0) == 0.0);
    CHECK(q.Phi_prime(0.0) == 0.0);
    CHECK(q.Phi_second(0.0) == 0.0);
    double worst = 0.0;
    for (double k = 1e-3; k <= 0.5; k *= 1.5) worst = std::max(worst, std::abs(q.Phi(k)) / (k * k * k));
    CHECK(worst < 1.0);

    double prev = -1e300, prevP = -1e300, vmax = 0.0, amax = 0.0;
    for (double k = -M; k <= M; k += 0.005) {
        CHECK(q.V(k) > prev);
        prev = q.V(k);
        if (k > 0.0) {
            CHECK(q.Phi(k) > prevP);
            prevP = q.Phi(k);
        }
        CHECK(q.Phi_prime(k) >= 0.0);
        CHECK(q.phi(k) <= q.a(k) * q.a(k) * (1.0 + 1e-15));
        vmax = std::max(vmax, std::abs(q.V_prime(k)));
        amax = std::max(amax, q.a(k));
        CHECK(q.Phi(-k) == Approx(-q.Phi(k)));
        CHECK(q.V(-k) == Approx(-q.V(k)));
    }
    CHECK(std::isfinite(vmax));
    CHECK(vmax <= M * M * M / 3.0 * amax * amax * amax);
    const auto [lo, hi] = q.v_range();
    for (double v = lo; v <= hi; v += (hi - lo) / 50.0) {
        CHECK(q.U(-v) == Approx(-q.U(v)).epsilon(1e-10));
        CHECK(q.diffusion(-v) == Approx(q.diffusion(v)).epsilon(1e-9));
    }
}

TEST_CASE("custom coefficients are validated")
{
    auto bad = CoefficientFunction::custom([](double k) { return 1.0 + k * k; }, nullptr, 0.5, 0.5);
    CHECK_THROWS_AS(TransformSpec::quadrature(bad, 1.0, 0.5), std::invalid_argument);
    auto wobbly = CoefficientFunction::custom([](double k) { return std::abs(std::sin(3.0 * k)); }, nullptr, 0.5, 0.5);
    CHECK_THROWS_AS(TransformSpec::quadrature(wobbly, 2.0, 0.5), std::invalid_argument);
}

TEST_CASE("phi profiles render and parse")
{
    for (const auto& p : {PhiProfile::squared_coefficient(), PhiProfile::power(2.5, 1.5), PhiProfile::curvature(0.375, -0.75),
                          PhiProfile::tabulated({{0.0, 0.0}, {1.0, 0.5}, {2.0, 3.0}})}) {
        const auto back = PhiProfile::parse(p.render());
        CHECK(back.render() == p.render());
    }
    CHECK_THROWS_AS(PhiProfile::parse("bogus"), std::invalid_argument);
    CHECK_THROWS_AS(PhiProfile::tabulated({{0.0, 0.0}, {1.0, 2.0}, {2.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("spec config round trip")
{
    const auto s = make_powerlaw_spec(3.0, 0.25, 7.0);
    const auto c = s.to_config();
    CHECK(KeyValueConfig::parse(c.render()) == c);
    const auto back = TransformSpec::from_config(c);
    CHECK(back.to_config() == c);
    CHECK(back.V(5.0) == s.V(5.0));

    const auto q = TransformSpec::quadrature(CoefficientFunction::power_law(2.0), 2.0, 0.5, PhiProfile::power(1.0, 1.5),
                                             QuadratureOptions{256, 4.0});
    const auto qc = q.to_config();
    const auto qb = TransformSpec::from_config(KeyValueConfig::parse(qc.render()));
    CHECK(qb.to_config() == qc);
    CHECK(qb.V(1.3) == q.V(1.3));
}
