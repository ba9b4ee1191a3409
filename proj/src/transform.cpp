#include "pmt/transform.hpp"

#include "pmt/quadrature.hpp"
#include "pmt/roots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pmt {

namespace {

double sgn(double x)
{
    return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
}

double signed_pow(double k, double e)
{
    return k == 0.0 ? 0.0 : sgn(k) * std::pow(std::abs(k), e);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// PhiProfile

PhiProfile PhiProfile::power(double c, double p)
{
    if (!(c > 0.0) || !(p > 0.0)) throw std::invalid_argument("phi power profile: need c > 0 and p > 0");
    PhiProfile out;
    out.kind = Kind::Power;
    out.coef = c;
    out.exponent = p;
    return out;
}

PhiProfile PhiProfile::tabulated(std::vector<std::pair<double, double>> points)
{
    if (points.size() < 2) throw std::invalid_argument("phi table: need at least two points");
    std::sort(points.begin(), points.end());
    if (points.front().first != 0.0 || points.front().second != 0.0)
        throw std::invalid_argument("phi table: must start at (0, 0)");
    for (std::size_t j = 1; j < points.size(); ++j) {
        if (!(points[j].first > points[j - 1].first)) throw std::invalid_argument("phi table: duplicate abscissa");
        if (!(points[j].second > 0.0)) throw std::invalid_argument("phi table: phi must be positive off zero");
        if (points[j].second < points[j - 1].second)
            throw std::invalid_argument("phi table: phi must be nondecreasing in |k|");
    }
    PhiProfile out;
    out.kind = Kind::Table;
    out.table = std::move(points);
    return out;
}

PhiProfile PhiProfile::curvature(double c, double p)
{
    if (c == 0.0 || !(p > -1.0)) throw std::invalid_argument("curvature profile: need c != 0 and p > -1");
    PhiProfile out;
    out.kind = Kind::Curvature;
    out.coef = c;
    out.exponent = p;
    return out;
}

double PhiProfile::raw(double k, const CoefficientFunction& coeff) const
{
    const double x = std::abs(k);
    switch (kind) {
    case Kind::SquaredCoefficient: {
        const double a = coeff.a(k);
        return a * a;
    }
    case Kind::Power:
        return x == 0.0 ? 0.0 : coef * std::pow(x, exponent);
    case Kind::Table: {
        if (x >= table.back().first) return table.back().second;
        auto hi = std::upper_bound(table.begin(), table.end(), x,
                                   [](double v, const auto& pt) { return v < pt.first; });
        auto lo = hi - 1;
        const double w = (x - lo->first) / (hi->first - lo->first);
        return lo->second + w * (hi->second - lo->second);
    }
    case Kind::Curvature:
        break;
    }
    throw std::logic_error("curvature profiles prescribe Phi'' and have no phi");
}

std::string PhiProfile::render() const
{
    switch (kind) {
    case Kind::SquaredCoefficient:
        return "a2";
    case Kind::Power:
        return "power:" + format_double(coef) + ":" + format_double(exponent);
    case Kind::Curvature:
        return "curvature:" + format_double(coef) + ":" + format_double(exponent);
    case Kind::Table: {
        std::string s = "table:";
        for (std::size_t j = 0; j < table.size(); ++j) {
            if (j) s += ",";
            s += format_double(table[j].first) + "/" + format_double(table[j].second);
        }
        return s;
    }
    }
    return {};
}

PhiProfile PhiProfile::parse(const std::string& text)
{
    if (text == "a2") return squared_coefficient();
    const auto parts = split(text, ':');
    if (parts.size() == 3 && (parts[0] == "power" || parts[0] == "curvature")) {
        const double c = parse_double(parts[1], "phi coefficient");
        const double p = parse_double(parts[2], "phi exponent");
        return parts[0] == "power" ? power(c, p) : curvature(c, p);
    }
    if (parts.size() == 2 && parts[0] == "table") {
        std::vector<std::pair<double, double>> pts;
        for (const auto& item : split(parts[1], ',')) {
            const auto kv = split(item, '/');
            if (kv.size() != 2) throw std::invalid_argument("phi table: expected `k/value` items");
            pts.emplace_back(parse_double(kv[0], "phi table k"), parse_double(kv[1], "phi table value"));
        }
        return tabulated(std::move(pts));
    }
    throw std::invalid_argument("phi: unknown profile `" + text + "` (a2 | power:C:P | table:k/v,... | curvature:C:P)");
}

ScalarFn cap_phi(ScalarFn phi_raw, ScalarFn a, double M)
{
    if (!(M > 0.0)) throw std::invalid_argument("cap_phi: M must be > 0");
    if (phi_raw(0.0) != 0.0) throw std::invalid_argument("cap_phi: phi(0) must be 0");
    constexpr int samples = 256;
    for (int j = -samples; j <= samples; ++j) {
        const double k = M * j / samples;
        if (!(phi_raw(k) >= 0.0)) throw std::invalid_argument("cap_phi: phi must be nonnegative");
    }
    return [phi_raw = std::move(phi_raw), a = std::move(a)](double k) {
        const double ak = a(k);
        return std::min(phi_raw(k), ak * ak);
    };
}

// ---------------------------------------------------------------------------
// PowerLawFormulas

PowerLawFormulas PowerLawFormulas::from(double m, double alpha)
{
    if (!(m > 1.0)) throw std::invalid_argument("power-law transform: m must be > 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("power-law transform: alpha must lie in (0, 1)");
    const double p = 1.0 - 1.0 / m;
    PowerLawFormulas f;
    f.m = m;
    f.alpha = alpha;
    f.phi_coef = m * (1.0 + alpha) / (2.0 + alpha);
    f.phi_exp = p * (2.0 + alpha);
    f.v_exp = p * (1.0 + alpha);
    f.fbar_coef = (1.0 + alpha) * (m - 1.0) * (p * (2.0 + alpha) - 1.0);
    f.fbar_exp = p * (2.0 + alpha) - 2.0;
    f.diffusion_coef = m;
    f.diffusion_exp = 1.0 / (1.0 + alpha);
    return f;
}

// ---------------------------------------------------------------------------
// Quadrature tables: one per sign, each integrating over [0, M] with phi and
// a mirrored onto the positive axis.

struct TransformSpec::Tables {
    struct Side {
        explicit Side(quad::GradedMesh m) : mesh(m) {}

        quad::GradedMesh mesh;
        bool curvature = false;
        double curv_coef = 0.0;
        double curv_exp = 0.0;
        ScalarFn phi;
        ScalarFn a;
        std::vector<double> g, p1, p0, w, gp;

        double g_at(double x) const
        {
            const auto j = mesh.panel_of(x);
            return g[j] + mesh.integrate_from_node([this](double z) { return phi(0.5 * z); }, j, x);
        }
        double curv_at(double x) const
        {
            if (curvature) return x == 0.0 ? 0.0 : curv_coef * std::pow(x, curv_exp);
            const double gx = g_at(x);
            return gx * gx;
        }
        double p1_at(double x) const
        {
            const auto j = mesh.panel_of(x);
            return p1[j] + mesh.integrate_from_node([this](double z) { return curv_at(z); }, j, x);
        }
        double p0_at(double x) const
        {
            const auto j = mesh.panel_of(x);
            return p0[j] + mesh.integrate_from_node([this](double z) { return p1_at(z); }, j, x);
        }
        double w_at(double x) const
        {
            const auto j = mesh.panel_of(x);
            return w[j] + mesh.integrate_from_node([this](double z) { return p1_at(z) / a(z); }, j, x);
        }
        double gp_at(double x) const
        {
            const auto j = mesh.panel_of(x);
            return gp[j] + mesh.integrate_from_node([this](double z) { return std::sqrt(std::abs(curv_at(z))); }, j, x);
        }

        void build()
        {
            if (!curvature) g = mesh.cumulative([this](double z) { return phi(0.5 * z); });
            p1 = mesh.cumulative([this](double z) { return curv_at(z); });
            p0 = mesh.cumulative([this](double z) { return p1_at(z); });
            w = mesh.cumulative([this](double z) { return p1_at(z) / a(z); });
            gp = mesh.cumulative([this](double z) { return std::sqrt(std::abs(curv_at(z))); });
        }
    };

    Side pos;
    Side neg;

    const Side& side(double k) const { return k < 0.0 ? neg : pos; }
};

// ---------------------------------------------------------------------------
// TransformSpec

TransformSpec::TransformSpec(TransformMode mode, CoefficientFunction coeff, double M)
    : mode_(mode), coeff_(std::move(coeff)), M_(M)
{
    if (!(M > 0.0)) throw std::invalid_argument("transform: M must be > 0");
}

TransformSpec TransformSpec::closed_form(const PowerLawFormulas& formulas, double M, std::optional<double> alpha_u)
{
    TransformSpec spec(TransformMode::ClosedForm, CoefficientFunction::power_law(formulas.m), M);
    spec.alpha_ = formulas.alpha;
    spec.alpha_u_ = alpha_u;
    spec.formulas_ = formulas;
    return spec;
}

TransformSpec TransformSpec::quadrature(CoefficientFunction coeff, double M, double alpha_u, PhiProfile phi,
                                        QuadratureOptions opts, std::optional<double> alpha)
{
    coeff.validate_on(M);
    TransformSpec spec(TransformMode::Quadrature, coeff, M);
    spec.alpha_u_ = alpha_u;
    spec.alpha_ = alpha ? *alpha : derived_alpha(coeff, alpha_u);
    if (!(spec.alpha_ > 0.0 && spec.alpha_ < 1.0)) throw std::invalid_argument("transform: alpha must lie in (0, 1)");
    if (opts.nodes_per_unit < 1) throw std::invalid_argument("transform: nodes_per_unit must be >= 1");
    spec.phi_ = phi;
    spec.quad_ = opts;

    const auto panels = static_cast<std::size_t>(std::ceil(static_cast<double>(opts.nodes_per_unit) * M));
    auto tables = std::make_shared<Tables>(Tables{Tables::Side(quad::GradedMesh(M, panels, opts.grading)),
                                                  Tables::Side(quad::GradedMesh(M, panels, opts.grading))});
    const bool curvature = phi.kind == PhiProfile::Kind::Curvature;
    ScalarFn capped;
    if (!curvature) {
        capped = cap_phi([phi, coeff](double k) { return phi.raw(k, coeff); },
                         [coeff](double k) { return coeff.a(k); }, M);
    }
    for (int sign : {1, -1}) {
        auto& side = sign > 0 ? tables->pos : tables->neg;
        side.curvature = curvature;
        side.curv_coef = phi.coef;
        side.curv_exp = phi.exponent;
        if (!curvature) side.phi = [capped, sign](double z) { return capped(sign * z); };
        side.a = [coeff, sign](double z) { return coeff.a(sign * z); };
        side.build();
    }
    spec.tables_ = std::move(tables);
    return spec;
}

void TransformSpec::check_k(double k, const char* what) const
{
    if (!(std::abs(k) <= M_ * (1.0 + 1e-12)))
        throw std::invalid_argument(std::string(what) + ": |k| = " + format_double(std::abs(k)) +
                                    " exceeds M = " + format_double(M_));
}

double TransformSpec::phi(double k) const
{
    if (mode_ != TransformMode::Quadrature || phi_.kind == PhiProfile::Kind::Curvature)
        throw std::logic_error("phi is only defined for quadrature specs built from a modulus");
    check_k(k, "phi");
    const double ak = coeff_.a(k);
    return std::min(phi_.raw(k, coeff_), ak * ak);
}

double TransformSpec::Phi(double k) const
{
    check_k(k, "Phi");
    if (k == 0.0) return 0.0;
    if (mode_ == TransformMode::ClosedForm) return formulas_.phi_coef * signed_pow(k, formulas_.phi_exp);
    return sgn(k) * tables_->side(k).p0_at(std::abs(k));
}

double TransformSpec::Phi_prime(double k) const
{
    check_k(k, "Phi'");
    if (k == 0.0) return 0.0;
    if (mode_ == TransformMode::ClosedForm)
        return formulas_.phi_coef * formulas_.phi_exp * std::pow(std::abs(k), formulas_.phi_exp - 1.0);
    return tables_->side(k).p1_at(std::abs(k));
}

double TransformSpec::Phi_second(double k) const
{
    check_k(k, "Phi''");
    if (k == 0.0) return 0.0;
    if (mode_ == TransformMode::ClosedForm)
        return formulas_.phi_coef * formulas_.phi_exp * (formulas_.phi_exp - 1.0) *
               signed_pow(k, formulas_.phi_exp - 2.0);
    return sgn(k) * tables_->side(k).curv_at(std::abs(k));
}

double TransformSpec::V(double k) const
{
    check_k(k, "V");
    if (k == 0.0) return 0.0;
    if (mode_ == TransformMode::ClosedForm) return signed_pow(k, formulas_.v_exp);
    return sgn(k) * tables_->side(k).w_at(std::abs(k));
}

double TransformSpec::V_prime(double k) const
{
    check_k(k, "V'");
    if (k == 0.0) return 0.0;
    if (mode_ == TransformMode::ClosedForm)
        return formulas_.v_exp * std::pow(std::abs(k), formulas_.v_exp - 1.0);
    return Phi_prime(k) / coeff_.a(k);
}

std::pair<double, double> TransformSpec::v_range() const
{
    return {V(-M_), V(M_)};
}

double TransformSpec::U(double v) const
{
    const auto [lo, hi] = v_range();
    const double slack = 1e-12 * std::max(std::abs(lo), std::abs(hi));
    if (!(v >= lo - slack && v <= hi + slack))
        throw std::invalid_argument("U: v = " + format_double(v) + " outside the range of V [" + format_double(lo) +
                                    ", " + format_double(hi) + "]");
    v = std::clamp(v, lo, hi);
    if (v == 0.0) return 0.0;
    if (mode_ == TransformMode::ClosedForm) return signed_pow(v, 1.0 / formulas_.v_exp);
    return invert_increasing([this](double k) { return V(k); }, v, -M_, M_);
}

double TransformSpec::reaction_term(double u) const
{
    if (u == 0.0 || coeff_.reaction_free()) return 0.0;
    return Phi_prime(u) * coeff_.f(u) / coeff_.a(u);
}

double TransformSpec::fbar(double u, double grad_u_sq) const
{
    check_k(u, "fbar");
    if (!(grad_u_sq >= 0.0)) throw std::invalid_argument("fbar: |grad u|^2 must be >= 0");
    if (u == 0.0) return 0.0;
    if (mode_ == TransformMode::ClosedForm)
        return -formulas_.fbar_coef * signed_pow(u, formulas_.fbar_exp) * grad_u_sq;
    return -Phi_second(u) * grad_u_sq + reaction_term(u);
}

double TransformSpec::diffusion(double v) const
{
    if (mode_ == TransformMode::ClosedForm) {
        const auto [lo, hi] = v_range();
        const double slack = 1e-12 * std::max(std::abs(lo), std::abs(hi));
        if (!(v >= lo - slack && v <= hi + slack))
            throw std::invalid_argument("diffusion: v outside the range of V");
        return v == 0.0 ? 0.0 : formulas_.diffusion_coef * std::pow(std::abs(v), formulas_.diffusion_exp);
    }
    return coeff_.a(U(v));
}

double TransformSpec::gradient_potential(double k) const
{
    check_k(k, "G");
    if (k == 0.0) return 0.0;
    if (mode_ == TransformMode::ClosedForm) {
        const double c = formulas_.fbar_coef;
        const double e = 0.5 * formulas_.fbar_exp + 1.0;
        return std::sqrt(std::abs(c)) / e * signed_pow(k, e);
    }
    return sgn(k) * tables_->side(k).gp_at(std::abs(k));
}

KeyValueConfig TransformSpec::to_config() const
{
    KeyValueConfig c;
    if (!coeff_.is_power_law())
        throw std::logic_error("transform: custom coefficient `" + coeff_.name() + "` cannot be serialized");
    c.set("kind", "power_law");
    c.set("m", coeff_.m());
    c.set("alpha", alpha_);
    if (alpha_u_) c.set("alpha_u", *alpha_u_);
    c.set("M", M_);
    if (mode_ == TransformMode::ClosedForm) {
        c.set("mode", "closed_form");
    } else {
        c.set("mode", "quadrature");
        c.set("phi", phi_.render());
        c.set("nodes_per_unit", quad_.nodes_per_unit);
        c.set("grading", quad_.grading);
    }
    return c;
}

TransformSpec TransformSpec::from_config(const KeyValueConfig& c)
{
    const std::string kind = c.get_string("kind", "power_law");
    if (kind != "power_law")
        throw std::invalid_argument("transform config: only kind = power_law can be loaded (got `" + kind + "`)");
    const double m = c.get_double("m");
    const double M = c.get_double("M");
    const double alpha = c.get_double("alpha");
    std::optional<double> alpha_u;
    if (c.has("alpha_u")) alpha_u = c.get_double("alpha_u");
    const std::string mode = c.get_string("mode", "closed_form");
    if (mode == "closed_form") return closed_form(PowerLawFormulas::from(m, alpha), M, alpha_u);
    if (mode != "quadrature") throw std::invalid_argument("transform config: unknown mode `" + mode + "`");
    QuadratureOptions opts;
    opts.nodes_per_unit = static_cast<std::size_t>(c.get_int("nodes_per_unit", 1024));
    opts.grading = c.get_double("grading", 4.0);
    return quadrature(CoefficientFunction::power_law(m), M, alpha_u.value_or(0.5),
                      PhiProfile::parse(c.get_string("phi", "a2")), opts, alpha);
}

TransformSpec make_powerlaw_spec(double m, double alpha, double M)
{
    return TransformSpec::closed_form(PowerLawFormulas::from(m, alpha), M);
}

} // namespace pmt
