// pmt: scenario runner for the porous-medium transform library.
//
// Every subcommand resolves its settings as defaults < --config file < flags,
// writes CSV artifacts into --out and a manifest.txt holding the resolved
// settings, so `pmt <cmd> --config out/manifest.txt` repeats the run.

#include "pmt/barenblatt.hpp"
#include "pmt/error.hpp"
#include "pmt/holder.hpp"
#include "pmt/keyvalue.hpp"
#include "pmt/residual.hpp"
#include "pmt/roots.hpp"
#include "pmt/solver.hpp"
#include "pmt/transform.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace pmt;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Globals {
    std::string config_path;
    std::string out_dir = ".";
    int jobs = 1;
    std::string seed = "0x5EED";
};

// Flag values as typed by the user; only flags that were given are merged.
class FlagSet {
public:
    explicit FlagSet(CLI::App* app) : app_(app) {}

    void add(const std::string& key, const std::string& help)
    {
        opts_[key] = app_->add_option("--" + key, values_[key], help);
    }
    void add_flag(const std::string& key, const std::string& help)
    {
        opts_[key] = app_->add_flag("--" + key, flags_[key], help);
    }

    KeyValueConfig given() const
    {
        KeyValueConfig c;
        for (const auto& [key, opt] : opts_) {
            if (opt->count() == 0) continue;
            if (flags_.count(key))
                c.set(key, flags_.at(key) ? "true" : "false");
            else
                c.set(key, values_.at(key));
        }
        return c;
    }

private:
    CLI::App* app_;
    std::map<std::string, std::string> values_;
    std::map<std::string, bool> flags_;
    std::map<std::string, CLI::Option*> opts_;
};

// Typed access that names the flag in every error.
class Settings {
public:
    explicit Settings(KeyValueConfig c) : c_(std::move(c)) {}

    const KeyValueConfig& config() const { return c_; }
    KeyValueConfig& config() { return c_; }

    bool has(const std::string& key) const { return c_.has(key); }
    std::string str(const std::string& key) const
    {
        if (!c_.has(key)) throw UsageError("--" + key + " is required");
        return c_.get_string(key);
    }
    double num(const std::string& key) const { return parse_double(str(key), "--" + key); }
    std::int64_t integer(const std::string& key) const { return parse_int(str(key), "--" + key); }
    bool boolean(const std::string& key) const
    {
        if (!c_.has(key)) return false;
        const auto v = c_.get_string(key);
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw UsageError("--" + key + ": expected true or false, got `" + v + "`");
    }
    std::size_t count(const std::string& key, std::int64_t min) const
    {
        const auto v = integer(key);
        if (v < min) throw UsageError("--" + key + " must be >= " + std::to_string(min));
        return static_cast<std::size_t>(v);
    }

private:
    KeyValueConfig c_;
};

void check(bool ok, const std::string& flag, const std::string& what)
{
    if (!ok) throw UsageError("--" + flag + " " + what);
}

std::vector<double> parse_list(const std::string& text, const std::string& flag)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_double(item, "--" + flag));
    if (out.empty()) throw UsageError("--" + flag + " needs at least one value");
    return out;
}

Settings resolve(const Globals& g, KeyValueConfig defaults, const FlagSet& flags)
{
    if (!g.config_path.empty()) {
        if (!fs::exists(g.config_path)) throw UsageError("--config: no such file " + g.config_path);
        defaults.merge(KeyValueConfig::load(g.config_path));
    }
    defaults.merge(flags.given());
    return Settings(std::move(defaults));
}

std::uint64_t parse_seed(const std::string& text)
{
    const auto v = parse_int(text, "--seed");
    if (v < 0) throw UsageError("--seed must be nonnegative");
    return static_cast<std::uint64_t>(v);
}

fs::path prepare_out(const Globals& g)
{
    fs::path out(g.out_dir);
    fs::create_directories(out);
    return out;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

void write_manifest(const fs::path& out, const std::string& command, const Settings& s, const Globals& g)
{
    KeyValueConfig m;
    m.set("command", command);
    m.set("pmt_version", kVersion);
    m.set("compiler", __VERSION__);
    m.set("seed", g.seed);
    m.set("jobs", g.jobs);
    m.merge(s.config());
    write_text(out / "manifest.txt", m.render());
}

BarenblattParams barenblatt_params(const Settings& s)
{
    BarenblattParams p;
    p.m = s.num("m");
    p.d = static_cast<int>(s.integer("d"));
    p.C = s.num("C");
    p.tau = s.num("tau");
    check(p.m > 1.0, "m", "must be > 1");
    check(p.d >= 1, "d", "must be >= 1");
    check(p.C > 0.0, "C", "must be > 0");
    check(p.tau >= 0.0, "tau", "must be >= 0");
    return p;
}

// ---------------------------------------------------------------------------

void cmd_barenblatt(const Globals& g, const FlagSet& flags)
{
    KeyValueConfig d;
    for (auto [k, v] : {std::pair{"d", "1"}, {"C", "1"}, {"tau", "0"}, {"t0", "1"}, {"t1", "2"}, {"nt", "101"},
                        {"R", "6"}, {"nx", "301"}})
        d.set(k, v);
    const auto s = resolve(g, d, flags);
    const auto p = barenblatt_params(s);
    const double t0 = s.num("t0"), t1 = s.num("t1"), R = s.num("R");
    check(t0 >= 0.0, "t0", "must be >= 0");
    check(t1 > t0, "t1", "must exceed --t0");
    check(R > 0.0, "R", "must be > 0");
    check(t0 + p.tau > 0.0, "t0", "plus --tau must be > 0");
    const auto grid = make_grid(t0, t1, s.count("nt", 3), R, s.count("nx", 5), p.d);
    const auto field = ScalarField::sample(grid, [&p](double t, double x) { return barenblatt_value(p, t, x); });

    const auto out = prepare_out(g);
    std::ofstream os(out / "barenblatt.csv", std::ios::binary);
    write_csv(os, field);
    std::string radius = "t,support_radius\n";
    for (std::size_t n = 0; n < grid.nt(); ++n)
        radius += format_double(grid.t(n)) + "," + format_double(support_radius(p, grid.t(n))) + "\n";
    write_text(out / "support_radius.csv", radius);
    write_manifest(out, "barenblatt", s, g);
}

TransformSpec build_spec(const Settings& s, double M)
{
    const double m = s.num("m");
    check(m > 1.0, "m", "must be > 1");
    const auto mode = s.str("mode");
    if (mode == "closed") {
        const double alpha = s.num("alpha");
        check(alpha > 0.0 && alpha < 1.0, "alpha", "must lie in (0, 1)");
        return make_powerlaw_spec(m, alpha, M);
    }
    if (mode != "quadrature") throw UsageError("--mode must be closed or quadrature");
    QuadratureOptions q;
    q.nodes_per_unit = s.count("nodes-per-unit", 1);
    std::optional<double> alpha;
    if (s.has("alpha")) alpha = s.num("alpha");
    return TransformSpec::quadrature(CoefficientFunction::power_law(m), M, s.num("alpha-u"),
                                     PhiProfile::parse(s.str("phi")), q, alpha);
}

void cmd_transform(const Globals& g, const FlagSet& flags)
{
    KeyValueConfig d;
    for (auto [k, v] : {std::pair{"alpha", "0.5"}, {"mode", "closed"}, {"phi", "a2"}, {"alpha-u", "0.999"},
                        {"nodes-per-unit", "1024"}, {"table", "0:10:0.5"}})
        d.set(k, v);
    const auto s = resolve(g, d, flags);
    const auto range = s.str("table");
    std::vector<double> parts;
    {
        std::stringstream ss(range);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(parse_double(item, "--table"));
    }
    check(parts.size() == 3, "table", "expects lo:hi:step");
    const double lo = parts[0], hi = parts[1], step = parts[2];
    check(step > 0.0 && hi >= lo, "table", "needs lo <= hi and step > 0");
    const double M = s.has("M") ? s.num("M") : std::max(std::abs(lo), std::abs(hi));
    check(M > 0.0 && M >= std::max(std::abs(lo), std::abs(hi)), "M", "must be > 0 and cover the table");
    const auto spec = build_spec(s, M);

    std::string csv = "k,Phi,Phi_prime,Phi_second,V,V_prime,U_of_V,a,diffusion_of_V\n";
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step * (1.0 + 1e-12))) + 1;
    for (std::size_t j = 0; j < count; ++j) {
        const double k = lo + static_cast<double>(j) * step;
        const double v = spec.V(k);
        csv += format_double(k) + "," + format_double(spec.Phi(k)) + "," + format_double(spec.Phi_prime(k)) + "," +
               format_double(spec.Phi_second(k)) + "," + format_double(v) + "," + format_double(spec.V_prime(k)) +
               "," + format_double(spec.U(v)) + "," + format_double(spec.a(k)) + "," +
               format_double(spec.diffusion(v)) + "\n";
    }
    const auto out = prepare_out(g);
    write_text(out / "transform.csv", csv);
    write_text(out / "spec.txt", spec.to_config().render());
    write_manifest(out, "transform", s, g);
}

Scenario scenario_from(const Settings& s)
{
    try {
        return Scenario::from_config(s.config());
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

KeyValueConfig preset_defaults(const Globals& g, const FlagSet& flags, const std::string& fallback)
{
    // The preset may come from the config file or the flags.
    auto probe = resolve(g, KeyValueConfig{}, flags);
    const auto name = probe.has("preset") ? probe.str("preset") : fallback;
    Scenario sc;
    try {
        sc = scenario_preset(name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--preset: ") + e.what());
    }
    auto d = sc.to_config();
    d.set("preset", name);
    return d;
}

std::vector<double> read_profile_csv(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw UsageError("--u0-csv: cannot open " + path);
    std::vector<double> u0;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("x,", 0) == 0) continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw UsageError("--u0-csv: expected `x,value` rows");
        u0.push_back(parse_double(line.substr(comma + 1), "--u0-csv"));
    }
    return u0;
}

void cmd_solve(const Globals& g, const FlagSet& flags)
{
    auto d = preset_defaults(g, flags, "barenblatt-m2-solver");
    d.set("scheme", "auto");
    const auto s = resolve(g, d, flags);
    const auto sc = scenario_from(s);
    const std::size_t nt = sc.nt ? sc.nt : cfl_matched_nt(sc, sc.nx);

    const auto coeff = CoefficientFunction::power_law(sc.params.m);
    std::optional<PMEProblem> problem;
    bool oracle = sc.source != ScenarioSource::Zero;
    if (s.has("u0-csv")) {
        auto u0 = read_profile_csv(s.str("u0-csv"));
        check(u0.size() >= 5, "u0-csv", "needs at least 5 rows");
        const double left = u0.front(), right = u0.back();
        const bool radial = sc.params.d > 1;
        const double R = sc.radius;
        problem.emplace(coeff, R, u0.size(), sc.params.d, sc.t_start, sc.t_end, std::move(u0),
                        [=](double, double x) { return (!radial && x < 0.0) ? left : right; });
        oracle = false;
    } else if (sc.source == ScenarioSource::Zero) {
        problem.emplace(coeff, sc.radius, sc.nx, sc.params.d, sc.t_start, sc.t_end, std::vector<double>(sc.nx, 0.0));
    } else {
        problem.emplace(PMEProblem::barenblatt(sc.params, sc.radius, sc.nx, sc.t_start, sc.t_end));
    }
    const auto scheme = s.str("scheme");
    if (scheme == "standard")
        problem->scheme = SchemeKind::StandardForm;
    else if (scheme == "nondivergence")
        problem->scheme = SchemeKind::NonDivergence;
    else
        check(scheme == "auto", "scheme", "must be auto, standard or nondivergence");

    SolveStats stats;
    const auto u = solve(*problem, nt, &stats);
    const auto out = prepare_out(g);
    {
        std::ofstream os(out / "trajectory.csv", std::ios::binary);
        write_csv(os, u);
    }
    const auto& grid = u.grid();
    std::string diag = "t,mass,max_abs";
    if (oracle) diag += ",sup_error";
    diag += "\n";
    const double m = sc.params.m;
    for (std::size_t n = 0; n < grid.nt(); ++n) {
        diag += format_double(grid.t(n)) + "," +
                format_double(layer_integral(u, n, [m](double x) { return std::abs(to_standard_form(x, m)); }));
        double mx = 0.0, err = 0.0;
        for (std::size_t i = 0; i < grid.nx(); ++i) {
            mx = std::max(mx, std::abs(u(n, i)));
            if (oracle) err = std::max(err, std::abs(u(n, i) - barenblatt_value(sc.params, grid.t(n), grid.x(i))));
        }
        diag += "," + format_double(mx);
        if (oracle) diag += "," + format_double(err);
        diag += "\n";
    }
    write_text(out / "diagnostics.csv", diag);

    const auto compat = compatibility_check(*problem, sc.alpha);
    KeyValueConfig c;
    c.set("pass", compat.pass ? "true" : "false");
    c.set("max_defect", compat.max_defect);
    c.set("tolerance", compat.tolerance);
    c.set("nodes_checked", compat.nodes_checked);
    c.set("steps", stats.steps);
    c.set("min_dt", stats.min_dt);
    c.set("max_dt", stats.max_dt);
    write_text(out / "solve_report.txt", c.render());
    auto resolved = s;
    resolved.config().set("nt_resolved", nt);
    write_manifest(out, "solve", resolved, g);
}

void cmd_verify(const Globals& g, const FlagSet& flags)
{
    auto d = preset_defaults(g, flags, "barenblatt-m2-alpha05");
    d.set("levels", "3");
    d.set("band-cells", "3");
    d.set("points", "1000");
    const auto s = resolve(g, d, flags);
    const auto sc = scenario_from(s);
    std::vector<Level> levels;
    if (s.has("nx-list")) {
        std::vector<std::size_t> nxs;
        for (double v : parse_list(s.str("nx-list"), "nx-list")) {
            check(v >= 5 && v == std::floor(v), "nx-list", "entries must be integers >= 5");
            nxs.push_back(static_cast<std::size_t>(v));
        }
        levels = cfl_levels(sc, nxs);
    } else {
        levels = default_levels(sc, s.count("levels", 3));
    }
    StudyOptions opts;
    opts.jobs = g.jobs;
    opts.band_cells = s.num("band-cells");
    opts.holder.seed = parse_seed(g.seed);
    const auto table = convergence_study(sc, levels, opts);

    const auto out = prepare_out(g);
    write_text(out / "convergence.csv", table.render_csv(!s.boolean("no-timing")));
    write_text(out / "band.csv", table.render_band_csv());

    if (sc.source != ScenarioSource::Zero) {
        const double M = barenblatt_value(sc.params, sc.t_start, 0.0);
        const auto spec = make_powerlaw_spec(sc.params.m, sc.alpha, M);
        const auto pts = random_interior_points(sc.params, s.count("points", 1), sc.t_start, sc.t_end,
                                                parse_seed(g.seed));
        const auto id = identity_residual_analytic(sc.params, spec, pts);
        KeyValueConfig c;
        c.set("points", pts.size());
        c.set("sup_residual", id.sup_norm);
        write_text(out / "identity.txt", c.render());
    }
    write_manifest(out, "verify", s, g);
}

void cmd_psi(const Globals& g, const FlagSet& flags)
{
    auto d = preset_defaults(g, flags, "barenblatt-m2");
    for (auto [k, v] : {std::pair{"ks", "0.5,0.25,0.125"}, {"alpha-a", "0.5"}, {"alpha-f", "0.5"}, {"alpha-u", "1"},
                        {"traces", "false"}})
        d.set(k, v);
    const auto s = resolve(g, d, flags);
    const auto sc = scenario_from(s);
    const std::size_t nt = sc.nt ? sc.nt : cfl_matched_nt(sc, sc.nx);
    const auto u = scenario_field(sc, Level{nt, sc.nx});

    PsiExponents ex;
    ex.alpha_a = s.num("alpha-a");
    ex.alpha_f = s.num("alpha-f");
    ex.alpha_u = s.num("alpha-u");
    ex.alpha = sc.alpha;
    check(ex.alpha_u > 0.0 && ex.alpha_u <= 1.0, "alpha-u", "must lie in (0, 1]");
    auto ks = parse_list(s.str("ks"), "ks");
    for (double k : ks) check(k > 0.0 && k <= u.max_abs(), "ks", "entries must lie in (0, max|u|]");
    HolderOptions ho;
    ho.seed = parse_seed(g.seed);
    const auto coeff = CoefficientFunction::power_law(sc.params.m);
    const auto prof = psi_profile(u, coeff, ex, ks, s.boolean("traces"), ho);

    const auto out = prepare_out(g);
    write_text(out / "psi.csv", prof.render_csv());
    // Components next to both readings of the modulus bound with phi = a^2:
    // the reciprocal 1/phi(k) and the inverse function phi^{-1}(k).
    std::string comp = "k,holder_u,norm_2plus,reciprocal_phi,inverse_phi\n";
    for (std::size_t j = 0; j < prof.k.size(); ++j) {
        const double k = prof.k[j];
        const double phi = coeff.a(k) * coeff.a(k);
        const double inv = invert_increasing([&](double x) { return coeff.a(x) * coeff.a(x); }, k, 0.0,
                                             std::max(1.0, 2.0 * k));
        comp += format_double(k) + "," + format_double(prof.holder_u[j]) + "," + format_double(prof.norm_2plus[j]) +
                "," + format_double(1.0 / phi) + "," + format_double(inv) + "\n";
    }
    write_text(out / "psi_components.csv", comp);
    write_manifest(out, "psi", s, g);
}

void add_scenario_flags(FlagSet& f)
{
    f.add("preset", "named scenario");
    f.add("data", "barenblatt | solver | zero");
    f.add("m", "nonlinearity exponent (> 1)");
    f.add("d", "dimension");
    f.add("C", "Barenblatt constant");
    f.add("tau", "time shift");
    f.add("alpha", "transform exponent in (0, 1)");
    f.add("R", "domain radius");
    f.add("t0", "start time");
    f.add("t1", "end time");
    f.add("nx", "space nodes");
    f.add("nt", "time nodes (0: CFL-matched)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Porous-medium transform toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "key = value settings file")->capture_default_str();
    app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--jobs", g.jobs, "parallel refinement levels")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--seed", g.seed, "sampling seed (hex accepted)")->capture_default_str();

    auto* bar = app.add_subcommand("barenblatt", "sample the Barenblatt solution");
    FlagSet bar_f(bar);
    for (auto k : {"m", "d", "C", "tau", "t0", "t1", "nt", "R", "nx"}) bar_f.add(k, "");

    auto* tr = app.add_subcommand("transform", "tabulate Phi, V, U for a power-law coefficient");
    FlagSet tr_f(tr);
    tr_f.add("m", "nonlinearity exponent (> 1)");
    tr_f.add("alpha", "transform exponent");
    tr_f.add("M", "range bound (default: table extent)");
    tr_f.add("mode", "closed | quadrature");
    tr_f.add("phi", "a2 | power:C:P | table:k/v,... | curvature:C:P");
    tr_f.add("alpha-u", "Hoelder exponent of u (quadrature mode)");
    tr_f.add("nodes-per-unit", "quadrature panels per unit of k");
    tr_f.add("table", "lo:hi:step");

    auto* so = app.add_subcommand("solve", "explicit finite-difference solve");
    FlagSet so_f(so);
    add_scenario_flags(so_f);
    so_f.add("scheme", "auto | standard | nondivergence");
    so_f.add("u0-csv", "initial profile as x,value rows");

    auto* ve = app.add_subcommand("verify", "refinement study of original vs transformed residuals");
    FlagSet ve_f(ve);
    add_scenario_flags(ve_f);
    ve_f.add("levels", "number of levels nx = 101, 201, ...");
    ve_f.add("nx-list", "explicit comma-separated nx values");
    ve_f.add("band-cells", "interface band half-width in cells");
    ve_f.add("points", "random points for the analytic identity");
    ve_f.add_flag("no-timing", "write runtime_s as 0 for byte-stable output");

    auto* ps = app.add_subcommand("psi", "level-set regularity profile");
    FlagSet ps_f(ps);
    add_scenario_flags(ps_f);
    ps_f.add("ks", "comma-separated thresholds");
    ps_f.add("alpha-a", "Hoelder exponent of a");
    ps_f.add("alpha-f", "Hoelder exponent of f");
    ps_f.add("alpha-u", "Hoelder exponent of u");
    ps_f.add_flag("traces", "include initial and boundary traces");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*bar) cmd_barenblatt(g, bar_f);
        if (*tr) cmd_transform(g, tr_f);
        if (*so) cmd_solve(g, so_f);
        if (*ve) cmd_verify(g, ve_f);
        if (*ps) cmd_psi(g, ps_f);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
