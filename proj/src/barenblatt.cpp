#include "pmt/barenblatt.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pmt {

void BarenblattParams::validate() const
{
    if (!(m > 1.0)) throw std::invalid_argument("barenblatt: m must be > 1");
    if (d < 1) throw std::invalid_argument("barenblatt: d must be >= 1");
    if (!(C > 0.0)) throw std::invalid_argument("barenblatt: C must be > 0");
    if (!(tau >= 0.0)) throw std::invalid_argument("barenblatt: tau must be >= 0");
}

namespace {

double shifted_time(const BarenblattParams& p, double t)
{
    p.validate();
    const double s = t + p.tau;
    if (!(s > 0.0)) throw std::invalid_argument("barenblatt: t + tau must be > 0");
    return s;
}

} // namespace

double barenblatt_value(const BarenblattParams& p, double t, double x)
{
    const double T = shifted_time(p, t);
    const double w = p.C - p.kappa() * x * x * std::pow(T, -p.inner_exponent());
    if (w <= 0.0) return 0.0;
    return std::pow(T, -p.outer_exponent()) * std::pow(w, p.m / (p.m - 1.0));
}

BarenblattDerivatives barenblatt_derivatives(const BarenblattParams& p, double t, double x)
{
    const double T = shifted_time(p, t);
    const double b = p.inner_exponent();
    const double a_out = p.outer_exponent();
    const double kappa = p.kappa();
    const double Tb = std::pow(T, -b);
    const double w = p.C - kappa * x * x * Tb;
    if (w <= 0.0) return {};

    const double e = p.m / (p.m - 1.0);
    const double Ta = std::pow(T, -a_out);
    const double we = std::pow(w, e);
    const double we1 = std::pow(w, e - 1.0);
    const double we2 = std::pow(w, e - 2.0);

    BarenblattDerivatives out;
    // w_t = kappa b x^2 T^{-b-1},  w_x = -2 kappa x T^{-b},  w_xx = -2 kappa T^{-b}
    const double w_t = kappa * b * x * x * Tb / T;
    const double w_x = -2.0 * kappa * x * Tb;
    out.dt = -a_out * Ta / T * we + Ta * e * we1 * w_t;
    out.dx = Ta * e * we1 * w_x;
    // Lap = B_rr + (d-1)/r B_r; the w_x/r contribution folds into d * w_xx.
    out.lap = Ta * (e * (e - 1.0) * we2 * w_x * w_x + e * we1 * (-2.0 * kappa * Tb) * p.d);
    return out;
}

double support_radius(const BarenblattParams& p, double t)
{
    const double T = shifted_time(p, t);
    return std::sqrt(p.C / p.kappa()) * std::pow(T, 1.0 / p.q());
}

double barenblatt_mass(const BarenblattParams& p)
{
    p.validate();
    const double d = p.d;
    const double gamma = 1.0 / (p.m - 1.0);
    const double rho = std::sqrt(p.C / p.kappa());
    const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
    const double beta = std::tgamma(0.5 * d) * std::tgamma(gamma + 1.0) / std::tgamma(0.5 * d + gamma + 1.0);
    return sphere * std::pow(p.C, gamma) * std::pow(rho, d) * 0.5 * beta;
}

double to_standard_form(double u, double m)
{
    if (!(m > 1.0)) throw std::invalid_argument("standard form: m must be > 1");
    if (u == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(u), 1.0 / m), u);
}

double from_standard_form(double s, double m)
{
    if (!(m > 1.0)) throw std::invalid_argument("standard form: m must be > 1");
    if (s == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(s), m), s);
}

} // namespace pmt
