#include "pmt/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmt {

CoefficientFunction CoefficientFunction::power_law(double m)
{
    if (!(m > 1.0)) throw std::invalid_argument("power-law coefficient: m must be > 1");
    CoefficientFunction c;
    c.power_m_ = m;
    c.alpha_a_ = c.alpha_f_ = 1.0 - 1.0 / m;
    c.a_ = [m](double k) { return k == 0.0 ? 0.0 : m * std::pow(std::abs(k), 1.0 - 1.0 / m); };
    c.name_ = "power_law";
    return c;
}

CoefficientFunction CoefficientFunction::custom(ScalarFn a, ScalarFn f, double alpha_a, double alpha_f,
                                                std::string name)
{
    if (!a) throw std::invalid_argument("custom coefficient: a is required");
    auto in_unit = [](double e) { return e > 0.0 && e < 1.0; };
    if (!in_unit(alpha_a) || !in_unit(alpha_f))
        throw std::invalid_argument("custom coefficient: Hoelder exponents must lie in (0, 1)");
    CoefficientFunction c;
    c.a_ = std::move(a);
    c.f_ = std::move(f);
    c.alpha_a_ = alpha_a;
    c.alpha_f_ = alpha_f;
    c.name_ = std::move(name);
    return c;
}

double CoefficientFunction::a(double k) const
{
    return a_(k);
}

double CoefficientFunction::f(double k) const
{
    return f_ ? f_(k) : 0.0;
}

double CoefficientFunction::m() const
{
    if (!is_power_law()) throw std::logic_error("coefficient `" + name_ + "` is not a power law");
    return power_m_;
}

void CoefficientFunction::validate_on(double M, int samples) const
{
    if (!(M > 0.0)) throw std::invalid_argument("coefficient check: M must be > 0");
    samples = std::max(samples, 50);
    if (a(0.0) != 0.0) throw std::invalid_argument("coefficient `" + name_ + "`: a(0) must be 0");
    double prev_pos = 0.0, prev_neg = 0.0;
    for (int j = 1; j <= samples; ++j) {
        const double k = M * j / samples;
        const double ap = a(k), an = a(-k);
        if (!(ap > 0.0) || !(an > 0.0))
            throw std::invalid_argument("coefficient `" + name_ + "`: a must be positive away from 0");
        if (ap < prev_pos || an < prev_neg)
            throw std::invalid_argument("coefficient `" + name_ + "`: a must grow with |u|");
        prev_pos = ap;
        prev_neg = an;
    }
}

double derived_alpha(const CoefficientFunction& coeff, double alpha_u)
{
    if (!(alpha_u > 0.0 && alpha_u < 1.0)) throw std::invalid_argument("alpha_u must lie in (0, 1)");
    return std::min(coeff.alpha_a(), coeff.alpha_f()) * alpha_u;
}

} // namespace pmt
