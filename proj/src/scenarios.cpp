#include "pmt/residual.hpp"

#include <stdexcept>

namespace pmt {

namespace {

const char* source_name(ScenarioSource s)
{
    switch (s) {
    case ScenarioSource::Analytic: return "barenblatt";
    case ScenarioSource::Solver: return "solver";
    case ScenarioSource::Zero: return "zero";
    }
    return "barenblatt";
}

ScenarioSource parse_source(const std::string& s)
{
    if (s == "barenblatt") return ScenarioSource::Analytic;
    if (s == "solver") return ScenarioSource::Solver;
    if (s == "zero") return ScenarioSource::Zero;
    throw std::invalid_argument("scenario: unknown data source '" + s + "' (barenblatt | solver | zero)");
}

} // namespace

void Scenario::validate() const
{
    params.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("scenario: alpha must lie in (0, 1)");
    if (!(radius > 0.0)) throw std::invalid_argument("scenario: R must be > 0");
    if (!(t_start >= 0.0 && t_end > t_start)) throw std::invalid_argument("scenario: need t1 > t0 >= 0");
    if (!(t_start + params.tau > 0.0)) throw std::invalid_argument("scenario: t0 + tau must be > 0");
    if (nx < 5) throw std::invalid_argument("scenario: nx must be >= 5");
    if (nt != 0 && nt < 3) throw std::invalid_argument("scenario: nt must be 0 (CFL-matched) or >= 3");
}

KeyValueConfig Scenario::to_config() const
{
    KeyValueConfig c;
    c.set("scenario", name);
    c.set("data", source_name(source));
    c.set("m", params.m);
    c.set("d", params.d);
    c.set("C", params.C);
    c.set("tau", params.tau);
    c.set("alpha", alpha);
    c.set("R", radius);
    c.set("t0", t_start);
    c.set("t1", t_end);
    c.set("nx", nx);
    c.set("nt", nt);
    return c;
}

Scenario Scenario::from_config(const KeyValueConfig& c)
{
    Scenario s;
    s.name = c.get_string("scenario", s.name);
    s.source = parse_source(c.get_string("data", source_name(s.source)));
    s.params.m = c.get_double("m", s.params.m);
    s.params.d = static_cast<int>(c.get_int("d", s.params.d));
    s.params.C = c.get_double("C", s.params.C);
    s.params.tau = c.get_double("tau", s.params.tau);
    s.alpha = c.get_double("alpha", s.alpha);
    s.radius = c.get_double("R", s.radius);
    s.t_start = c.get_double("t0", s.t_start);
    s.t_end = c.get_double("t1", s.t_end);
    s.nx = static_cast<std::size_t>(c.get_int("nx", static_cast<std::int64_t>(s.nx)));
    s.nt = static_cast<std::size_t>(c.get_int("nt", static_cast<std::int64_t>(s.nt)));
    s.validate();
    return s;
}

std::vector<std::string> scenario_preset_names()
{
    return {"barenblatt-m2-alpha05", "barenblatt-m2", "barenblatt-m2-solver", "zero"};
}

Scenario scenario_preset(const std::string& name)
{
    Scenario s;
    s.name = name;
    if (name == "barenblatt-m2-alpha05" || name == "barenblatt-m2") return s;
    if (name == "barenblatt-m2-solver") {
        s.source = ScenarioSource::Solver;
        return s;
    }
    if (name == "zero") {
        s.source = ScenarioSource::Zero;
        return s;
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

} // namespace pmt
