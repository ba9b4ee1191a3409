#include "pmt/residual.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace pmt;
using doctest::Approx;

namespace {

const BarenblattParams kParams{2.0, 1, 1.0, 0.0};

TransformSpec spec_for(const PowerLawFormulas& f)
{
    return TransformSpec::closed_form(f, 1.5);
}

} // namespace

TEST_CASE("analytic identity holds inside the support")
{
    const auto spec = make_powerlaw_spec(2.0, 0.5, 1.5);
    const auto pts = random_interior_points(kParams, 1000, 1.0, 2.0, 0x5EED);
    CHECK(pts.size() == 1000);
    const auto r = identity_residual_analytic(kParams, spec, pts);
    MESSAGE("identity sup residual " << r.sup_norm);
    CHECK(r.sup_norm <= 1e-9);
    CHECK(r.divergence_free.size() == 1000);
    CHECK(r.divergence_form.size() == 1000);

    const auto origin = identity_residual_analytic(kParams, spec, {{1.5, 0.0}});
    CHECK(std::abs(origin.divergence_free[0]) <= 1e-9);
    CHECK(std::abs(origin.divergence_form[0]) <= 1e-9);
}

TEST_CASE("analytic identity in radial dimension and with quadrature tables")
{
    const BarenblattParams p3{2.0, 3, 1.0, 0.0};
    const auto spec = make_powerlaw_spec(2.0, 0.5, 1.5);
    CHECK(identity_residual_analytic(p3, spec, random_interior_points(p3, 200, 1.0, 2.0, 7)).sup_norm <= 1e-9);

    const auto quad = TransformSpec::quadrature(CoefficientFunction::power_law(2.0), 1.5, 0.5,
                                                PhiProfile::curvature(0.375, -0.75));
    const auto pts = random_interior_points(kParams, 200, 1.0, 2.0, 11, 0.9);
    CHECK(identity_residual_analytic(kParams, quad, pts).sup_norm <= 1e-6);
}

TEST_CASE("identity rejects points outside the support")
{
    const auto spec = make_powerlaw_spec(2.0, 0.5, 1.5);
    CHECK_THROWS_AS(identity_residual_analytic(kParams, spec, {{1.0, 10.0}}), std::invalid_argument);
    CHECK_THROWS_AS(identity_residual_analytic({3.0, 1, 1.0, 0.0}, spec, {{1.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("mutating any closed-form coefficient breaks the identity")
{
    const auto base = PowerLawFormulas::from(2.0, 0.5);
    const auto pts = random_interior_points(kParams, 1000, 1.0, 2.0, 0x5EED);
    double PowerLawFormulas::*fields[] = {&PowerLawFormulas::phi_coef,      &PowerLawFormulas::phi_exp,
                                          &PowerLawFormulas::v_exp,         &PowerLawFormulas::fbar_coef,
                                          &PowerLawFormulas::fbar_exp,      &PowerLawFormulas::diffusion_coef,
                                          &PowerLawFormulas::diffusion_exp};
    for (auto field : fields) {
        auto f = base;
        f.*field *= 1.01;
        const double r = identity_residual_analytic(kParams, spec_for(f), pts).sup_norm;
        CHECK(r > 1e-4);
    }
}

TEST_CASE("original residual of trivial fields")
{
    const auto g = make_grid(0, 1, 11, 2, 21, 1);
    const auto coeff = CoefficientFunction::power_law(2.0);
    const auto c = residual_original(ScalarField::constant(g, 0.8), coeff, RegionMask::full(g));
    CHECK(c.sup_norm <= 1e-12);
    REQUIRE(c.holder.has_value());
    CHECK(c.terms.size() == 2);

    const auto spec = make_powerlaw_spec(2.0, 0.5, 1.0);
    const auto zero = ScalarField::constant(g, 0.0);
    const auto t = residual_transformed(zero, spec, RegionMask::full(g));
    CHECK(t.sup_norm == 0.0);
    CHECK(residual_divergence_free(zero, spec, RegionMask::full(g)).sup_norm == 0.0);
}

TEST_CASE("discrete forms agree on smooth positive data")
{
    const auto g = make_grid(1, 1.2, 11, 2, 81, 1);
    const auto u = ScalarField::sample(g, [](double t, double x) { return 0.5 + 0.2 * std::cos(x) * t; });
    const auto spec = make_powerlaw_spec(2.0, 0.5, 1.0);
    ResidualOptions o;
    o.residual_holder = o.term_holders = false;
    const auto inner = RegionMask::where(g, [&](std::size_t n, std::size_t i) {
        return n + 1 < g.nt() && i > 1 && i + 2 < g.nx();
    });
    const auto v = apply_transform(u, spec);
    const auto a = residual_transformed(v, spec, inner, o, &u);
    const auto b = residual_divergence_free(u, spec, inner, o);
    double diff = 0.0;
    for (auto k : inner.nodes()) diff = std::max(diff, std::abs(a.field.values()[k] - b.field.values()[k]));
    CHECK(diff <= 1e-3);

    o.fbar = FbarDiscretization::ChainRule;
    const auto chain = discrete_fbar(u, spec, FbarDiscretization::ChainRule);
    const auto pot = discrete_fbar(u, spec, FbarDiscretization::GradientPotential);
    double fd = 0.0;
    for (auto k : inner.nodes()) fd = std::max(fd, std::abs(chain.values()[k] - pot.values()[k]));
    CHECK(fd <= 1e-2);
}

TEST_CASE("interface band and support interior")
{
    const auto g = make_grid(1, 2, 11, 6, 121, 1);
    const auto band = interface_band(g, kParams, 3.0);
    const auto inner = support_interior(g, kParams, 3.0);
    CHECK_FALSE(band.empty());
    CHECK((band & inner).empty());
    for (auto k : band.nodes()) {
        const std::size_t n = k / g.nx(), i = k % g.nx();
        CHECK(std::abs(std::abs(g.x(i)) - support_radius(kParams, g.t(n))) <= 3.0 * g.h() + 1e-12);
    }
}

TEST_CASE("scenario presets and config round trip")
{
    for (const auto& name : scenario_preset_names()) {
        const auto s = scenario_preset(name);
        const auto back = Scenario::from_config(KeyValueConfig::parse(s.to_config().render()));
        CHECK(back.to_config() == s.to_config());
    }
    CHECK_THROWS_AS(scenario_preset("nope"), std::invalid_argument);
    auto s = scenario_preset("barenblatt-m2");
    s.alpha = 1.5;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("CFL-matched levels")
{
    const auto s = scenario_preset("barenblatt-m2-alpha05");
    const auto lv = default_levels(s, 3);
    REQUIRE(lv.size() == 3);
    CHECK(lv[0].nx == 101);
    CHECK(lv[1].nx == 201);
    CHECK(lv[2].nx == 401);
    CHECK(lv[1].nt > 3 * lv[0].nt);
    CHECK(lv[2].nt > 3 * lv[1].nt);
}

TEST_CASE("study rejects non-refining levels")
{
    const auto s = scenario_preset("zero");
    CHECK_THROWS_AS(convergence_study(s, {{10, 21}, {20, 41}}), std::invalid_argument);
    CHECK_THROWS_AS(convergence_study(s, {{10, 21}, {20, 41}, {20, 81}}), std::invalid_argument);
    CHECK_THROWS_AS(convergence_study(s, {{10, 21}, {20, 41}, {40, 41}}), std::invalid_argument);
}

TEST_CASE("study on zero data is all zero")
{
    const auto s = scenario_preset("zero");
    const auto t = convergence_study(s, {{10, 21}, {20, 41}, {40, 81}});
    REQUIRE(t.rows.size() == 3);
    for (const auto& r : t.rows) {
        CHECK(r.sup_res_orig == 0.0);
        CHECK(r.sup_res_trans == 0.0);
        CHECK(r.semi_dtu == 0.0);
        CHECK(r.semi_lap_u == 0.0);
        CHECK(r.semi_dtv == 0.0);
        CHECK(r.semi_lap_Phi == 0.0);
    }
    const auto csv = t.render_csv(false);
    CHECK(csv.rfind("level,nt,nx,sup_res_orig,sup_res_trans,semi_dtu,semi_lap_u,semi_dtv,semi_lap_Phi,runtime_s\n", 0) == 0);
    CHECK(csv == convergence_study(s, {{10, 21}, {20, 41}, {40, 81}}).render_csv(false));
    CHECK(t.render_band_csv().rfind("level,nx,band_lap_u,band_lap_Phi\n", 0) == 0);
}

TEST_CASE("parallel study matches the serial one")
{
    auto s = scenario_preset("barenblatt-m2-alpha05");
    const std::vector<Level> lv{{40, 41}, {80, 61}, {160, 81}};
    StudyOptions par;
    par.jobs = 3;
    CHECK(convergence_study(s, lv).render_csv(false) == convergence_study(s, lv, par).render_csv(false));
}
