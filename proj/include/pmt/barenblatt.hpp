#pragma once

// Closed-form Barenblatt solutions of  d_t u = m u^{1-1/m} Lap u,
//
//   B(t, x) = t^{-md/q} (C - kappa |x|^2 t^{-2/q})_+^{m/(m-1)},
//   q = d(m-1) + 2,  kappa = (m-1) / (2 m q),
//
// evaluated at the shifted time t + tau. B^{1/m} solves the standard porous
// medium equation d_t s = Lap(s^m) and conserves mass.

namespace pmt {

struct BarenblattParams {
    double m = 2.0;
    int d = 1;
    double C = 1.0;
    double tau = 1.0;

    void validate() const;

    double q() const { return d * (m - 1.0) + 2.0; }
    double outer_exponent() const { return m * d / q(); }
    double inner_exponent() const { return 2.0 / q(); }
    double kappa() const { return (m - 1.0) / (2.0 * m * q()); }
};

struct BarenblattDerivatives {
    double dt = 0.0;  ///< d_t B
    double dx = 0.0;  ///< d_x B in 1D, d_r B in radial mode
    double lap = 0.0; ///< Lap B (radial Laplacian for d > 1)
};

/// Returns 0 outside the support. x is the signed coordinate in 1D and the
/// radius otherwise; only |x| matters.
double barenblatt_value(const BarenblattParams& p, double t, double x);

/// Interior closed-form derivatives; all three are 0 on and outside the free
/// boundary. The jump of Lap B across the interface is left intact.
BarenblattDerivatives barenblatt_derivatives(const BarenblattParams& p, double t, double x);

/// Position of the free boundary at time t (shifted by tau).
double support_radius(const BarenblattParams& p, double t);

/// Mass of the standard-form solution, int B^{1/m} dx over R^d.
double barenblatt_mass(const BarenblattParams& p);

/// s = u |u|^{1/m - 1}
double to_standard_form(double u, double m);
/// u = s |s|^{m - 1}
double from_standard_form(double s, double m);

} // namespace pmt
