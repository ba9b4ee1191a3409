#include "pmt/barenblatt.hpp"
#include "pmt/error.hpp"
#include "pmt/holder.hpp"
#include "pmt/residual.hpp"
#include "pmt/solver.hpp"
#include "pmt/transform.hpp"

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pmt;

namespace {

py::array_t<double> to_array(const ScalarField& f)
{
    const auto& g = f.grid();
    py::array_t<double> out({g.nt(), g.nx()});
    auto buf = out.mutable_unchecked<2>();
    for (std::size_t n = 0; n < g.nt(); ++n)
        for (std::size_t i = 0; i < g.nx(); ++i) buf(n, i) = f(n, i);
    return out;
}

ScalarField from_array(const SpaceTimeGrid& g, py::array_t<double, py::array::c_style | py::array::forcecast> a)
{
    if (a.ndim() != 2 || static_cast<std::size_t>(a.shape(0)) != g.nt() ||
        static_cast<std::size_t>(a.shape(1)) != g.nx())
        throw std::invalid_argument("array shape must be (nt, nx) of the grid");
    return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

py::dict report_dict(const HolderReport& r)
{
    py::dict d;
    d["exponent"] = r.exponent;
    d["sup_norm"] = r.sup_norm;
    d["seminorm"] = r.seminorm;
    d["norm"] = r.norm;
    d["pairs_sampled"] = r.pairs_sampled;
    d["exhaustive"] = r.exhaustive;
    return d;
}

// Elementwise method over a scalar or array argument; the object itself is
// bound by reference rather than broadcast.
template <class T, class Fn>
auto elementwise(Fn fn)
{
    return [fn](const T& self, py::array_t<double> x) {
        return py::vectorize([&](double v) { return fn(self, v); })(x);
    };
}

} // namespace

PYBIND11_MODULE(_pmt, m)
{
    m.doc() = "Porous-medium transform toolkit";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<BarenblattParams>(m, "BarenblattParams")
        .def(py::init([](double mm, int d, double C, double tau) { return BarenblattParams{mm, d, C, tau}; }),
             py::arg("m") = 2.0, py::arg("d") = 1, py::arg("C") = 1.0, py::arg("tau") = 1.0)
        .def_readwrite("m", &BarenblattParams::m)
        .def_readwrite("d", &BarenblattParams::d)
        .def_readwrite("C", &BarenblattParams::C)
        .def_readwrite("tau", &BarenblattParams::tau)
        .def("validate", &BarenblattParams::validate);

    m.def(
        "barenblatt_value",
        [](const BarenblattParams& p, py::array_t<double> t, py::array_t<double> x) {
            return py::vectorize([&p](double tt, double xx) { return barenblatt_value(p, tt, xx); })(t, x);
        },
        py::arg("params"), py::arg("t"), py::arg("x"));
    m.def(
        "barenblatt_derivatives",
        [](const BarenblattParams& p, double t, double x) {
            const auto d = barenblatt_derivatives(p, t, x);
            return py::make_tuple(d.dt, d.dx, d.lap);
        },
        py::arg("params"), py::arg("t"), py::arg("x"));
    m.def("support_radius", &support_radius, py::arg("params"), py::arg("t"));
    m.def("barenblatt_mass", &barenblatt_mass, py::arg("params"));
    m.def("to_standard_form", py::vectorize(&to_standard_form), py::arg("u"), py::arg("m"));
    m.def("from_standard_form", py::vectorize(&from_standard_form), py::arg("s"), py::arg("m"));

    py::class_<PowerLawFormulas>(m, "PowerLawFormulas")
        .def_static("from_parameters", &PowerLawFormulas::from, py::arg("m"), py::arg("alpha"))
        .def_readwrite("m", &PowerLawFormulas::m)
        .def_readwrite("alpha", &PowerLawFormulas::alpha)
        .def_readwrite("phi_coef", &PowerLawFormulas::phi_coef)
        .def_readwrite("phi_exp", &PowerLawFormulas::phi_exp)
        .def_readwrite("v_exp", &PowerLawFormulas::v_exp)
        .def_readwrite("fbar_coef", &PowerLawFormulas::fbar_coef)
        .def_readwrite("fbar_exp", &PowerLawFormulas::fbar_exp)
        .def_readwrite("diffusion_coef", &PowerLawFormulas::diffusion_coef)
        .def_readwrite("diffusion_exp", &PowerLawFormulas::diffusion_exp);

    py::class_<TransformSpec>(m, "TransformSpec")
        .def_static(
            "closed_form", [](const PowerLawFormulas& f, double M) { return TransformSpec::closed_form(f, M); },
            py::arg("formulas"), py::arg("M"))
        .def_static(
            "quadrature",
            [](double mm, double M, double alpha_u, const std::string& phi, std::size_t nodes_per_unit) {
                QuadratureOptions q;
                q.nodes_per_unit = nodes_per_unit;
                return TransformSpec::quadrature(CoefficientFunction::power_law(mm), M, alpha_u,
                                                 PhiProfile::parse(phi), q);
            },
            py::arg("m"), py::arg("M"), py::arg("alpha_u"), py::arg("phi") = "a2", py::arg("nodes_per_unit") = 1024)
        .def_property_readonly("M", &TransformSpec::M)
        .def_property_readonly("alpha", &TransformSpec::alpha)
        .def_property_readonly("closed", [](const TransformSpec& s) { return s.mode() == TransformMode::ClosedForm; })
        .def("Phi", elementwise<TransformSpec>([](const TransformSpec& s, double k) { return s.Phi(k); }))
        .def("Phi_prime", elementwise<TransformSpec>([](const TransformSpec& s, double k) { return s.Phi_prime(k); }))
        .def("Phi_second", elementwise<TransformSpec>([](const TransformSpec& s, double k) { return s.Phi_second(k); }))
        .def("V", elementwise<TransformSpec>([](const TransformSpec& s, double k) { return s.V(k); }))
        .def("V_prime", elementwise<TransformSpec>([](const TransformSpec& s, double k) { return s.V_prime(k); }))
        .def("U", elementwise<TransformSpec>([](const TransformSpec& s, double v) { return s.U(v); }))
        .def("a", elementwise<TransformSpec>([](const TransformSpec& s, double k) { return s.a(k); }))
        .def("diffusion", elementwise<TransformSpec>([](const TransformSpec& s, double v) { return s.diffusion(v); }))
        .def("fbar",
             [](const TransformSpec& s, py::array_t<double> u, py::array_t<double> g2) {
                 return py::vectorize([&s](double a, double b) { return s.fbar(a, b); })(u, g2);
             })
        .def("to_config", [](const TransformSpec& s) { return s.to_config().render(); });

    m.def("make_powerlaw_spec", &make_powerlaw_spec, py::arg("m"), py::arg("alpha"), py::arg("M"));

    m.def(
        "sample_barenblatt",
        [](const BarenblattParams& p, double t0, double t1, std::size_t nt, double R, std::size_t nx) {
            const auto g = make_grid(t0, t1, nt, R, nx, p.d);
            return to_array(ScalarField::sample(g, [&p](double t, double x) { return barenblatt_value(p, t, x); }));
        },
        py::arg("params"), py::arg("t0"), py::arg("t1"), py::arg("nt"), py::arg("R"), py::arg("nx"));

    m.def(
        "solve_barenblatt",
        [](const BarenblattParams& p, double R, std::size_t nx, double t0, double t1, std::size_t nt) {
            py::gil_scoped_release release;
            auto u = solve(PMEProblem::barenblatt(p, R, nx, t0, t1), nt);
            py::gil_scoped_acquire acquire;
            return to_array(u);
        },
        py::arg("params"), py::arg("R"), py::arg("nx"), py::arg("t0"), py::arg("t1"), py::arg("nt"));

    m.def(
        "holder_seminorm",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> values, double t0, double t1, double R,
           int dim, double beta) {
            const auto g = make_grid(t0, t1, static_cast<std::size_t>(values.shape(0)), R,
                                     static_cast<std::size_t>(values.shape(1)), dim);
            const auto f = from_array(g, values);
            return report_dict(holder_seminorm(f, beta, RegionMask::full(g)));
        },
        py::arg("values"), py::arg("t0"), py::arg("t1"), py::arg("R"), py::arg("dim"), py::arg("beta"),
        "Seminorm over the whole grid; values has shape (nt, nx).");

    m.def(
        "identity_residual",
        [](const BarenblattParams& p, const TransformSpec& spec, std::size_t count, double t0, double t1,
           std::uint64_t seed) {
            return identity_residual_analytic(p, spec, random_interior_points(p, count, t0, t1, seed)).sup_norm;
        },
        py::arg("params"), py::arg("spec"), py::arg("count") = 1000, py::arg("t0") = 1.0, py::arg("t1") = 2.0,
        py::arg("seed") = 0x5EED);

    m.def(
        "convergence_study",
        [](const std::string& preset, std::vector<std::size_t> nxs) {
            const auto s = scenario_preset(preset);
            StudyTable table;
            {
                py::gil_scoped_release release;
                table = convergence_study(s, cfl_levels(s, nxs));
            }
            py::list rows;
            for (const auto& r : table.rows) {
                py::dict d;
                d["level"] = r.level;
                d["nt"] = r.nt;
                d["nx"] = r.nx;
                d["sup_res_orig"] = r.sup_res_orig;
                d["sup_res_trans"] = r.sup_res_trans;
                d["semi_dtu"] = r.semi_dtu;
                d["semi_lap_u"] = r.semi_lap_u;
                d["semi_dtv"] = r.semi_dtv;
                d["semi_lap_Phi"] = r.semi_lap_Phi;
                d["band_lap_u"] = r.band_lap_u;
                d["band_lap_Phi"] = r.band_lap_Phi;
                rows.append(d);
            }
            return rows;
        },
        py::arg("preset"), py::arg("nx_list"));
}
