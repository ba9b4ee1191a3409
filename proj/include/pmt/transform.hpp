#pragma once

// The change of unknowns v = V(u) that turns  d_t u = a(u) Lap u + f(u)
// into  d_t v = div(a(U(v)) grad v) + fbar_u  with Hoelder-continuous terms.
//
// Given a modulus phi with phi(0) = 0 and phi <= a^2,
//
//   Phi(k)  = int_0^k int_0^x ( int_0^y phi(z/2) dz )^2 dy dx,
//   V(k)    = int_0^k Phi'(x) / a(x) dx,     U = V^{-1},
//   fbar_u  = -Phi''(u) |grad u|^2 + (Phi' f / a)(u).
//
// Both sides of zero are built from the integrals over [0, |k|] with phi
// and a mirrored, and then extended oddly: Phi, V, U and Phi'' are odd,
// Phi' and V' are even and nonnegative, so V increases on all of [-M, M].
// The degenerate point k = 0 takes the value 0 for every derivative.
//
// phi must vanish at 0, be positive elsewhere and nondecreasing in |k|.

#include "pmt/coefficient.hpp"
#include "pmt/keyvalue.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pmt {

/// Source of the modulus phi in quadrature mode.
///
/// SquaredCoefficient is phi = a^2 (the cap made tight). Power is
/// c |k|^p, Table interpolates (|k|, phi) pairs linearly and holds the last
/// value beyond the table. Curvature bypasses phi and prescribes
/// Phi''(k) = c |k|^p for k > 0 directly, which covers profiles such as the
/// closed-form power-law family whose Phi'' is unbounded at 0 and therefore
/// has no phi representation.
struct PhiProfile {
    enum class Kind { SquaredCoefficient, Power, Table, Curvature };

    Kind kind = Kind::SquaredCoefficient;
    double coef = 1.0;
    double exponent = 1.0;
    std::vector<std::pair<double, double>> table;

    static PhiProfile squared_coefficient() { return {}; }
    static PhiProfile power(double c, double p);
    static PhiProfile tabulated(std::vector<std::pair<double, double>> points);
    static PhiProfile curvature(double c, double p);

    /// Uncapped phi(k); throws for Kind::Curvature.
    double raw(double k, const CoefficientFunction& coeff) const;

    /// `a2`, `power:C:P`, `table:k/v,k/v,...`, `curvature:C:P`
    std::string render() const;
    static PhiProfile parse(const std::string& text);
};

/// k -> min(phi_raw(k), a(k)^2). Samples [-M, M] to check phi_raw >= 0 and
/// phi_raw(0) = 0.
ScalarFn cap_phi(ScalarFn phi_raw, ScalarFn a, double M);

/// Coefficients of the power-law transform for a(u) = m |u|^{1-1/m}, f = 0:
///
///   Phi(k)  = phi_coef k^{phi_exp},          phi_exp = (1-1/m)(2+alpha)
///   V(k)    = k^{v_exp},                     v_exp   = (1-1/m)(1+alpha)
///   fbar    = -fbar_coef k^{fbar_exp} |grad u|^2
///   a(U(v)) = diffusion_coef v^{diffusion_exp}
///
/// Each formula reads only its own entries, so perturbing one entry breaks
/// the identities in exactly one place.
struct PowerLawFormulas {
    double m = 2.0;
    double alpha = 0.5;
    double phi_coef = 0.0;
    double phi_exp = 0.0;
    double v_exp = 0.0;
    double fbar_coef = 0.0;
    double fbar_exp = 0.0;
    double diffusion_coef = 0.0;
    double diffusion_exp = 0.0;

    static PowerLawFormulas from(double m, double alpha);
};

enum class TransformMode { ClosedForm, Quadrature };

struct QuadratureOptions {
    std::size_t nodes_per_unit = 1024;
    /// Panels are graded as k = M s^grading to resolve the degeneracy at 0.
    double grading = 4.0;
};

class TransformSpec {
public:
    static TransformSpec closed_form(const PowerLawFormulas& formulas, double M,
                                     std::optional<double> alpha_u = std::nullopt);
    /// alpha defaults to min(alpha_a, alpha_f) * alpha_u.
    static TransformSpec quadrature(CoefficientFunction coeff, double M, double alpha_u,
                                    PhiProfile phi = PhiProfile::squared_coefficient(),
                                    QuadratureOptions opts = {}, std::optional<double> alpha = std::nullopt);

    TransformMode mode() const { return mode_; }
    const CoefficientFunction& coeff() const { return coeff_; }
    double M() const { return M_; }
    double alpha() const { return alpha_; }
    std::optional<double> alpha_u() const { return alpha_u_; }
    const PhiProfile& phi_profile() const { return phi_; }
    const QuadratureOptions& quadrature_options() const { return quad_; }
    /// Only meaningful in closed-form mode.
    const PowerLawFormulas& formulas() const { return formulas_; }

    double a(double k) const { return coeff_.a(k); }
    /// Capped modulus; throws in closed-form mode and for curvature profiles.
    double phi(double k) const;

    double Phi(double k) const;
    double Phi_prime(double k) const;
    double Phi_second(double k) const;
    double V(double k) const;
    double V_prime(double k) const;
    /// Inverse of V. Bisection to 1e-12 relative in quadrature mode.
    double U(double v) const;
    double fbar(double u, double grad_u_sq) const;
    /// a(U(v)), the diffusivity of the transformed equation.
    double diffusion(double v) const;

    /// G with G' = sqrt|Phi''|, odd. Phi''(u)|grad u|^2 = sign(Phi''(u)) |grad G(u)|^2.
    /// The closed form reads the fbar entries.
    double gradient_potential(double k) const;
    /// (Phi' f / a)(u), zero at u = 0 and for reaction-free coefficients.
    double reaction_term(double u) const;

    std::pair<double, double> v_range() const;

    KeyValueConfig to_config() const;
    static TransformSpec from_config(const KeyValueConfig& config);

private:
    struct Tables;

    TransformSpec(TransformMode mode, CoefficientFunction coeff, double M);
    void check_k(double k, const char* what) const;

    TransformMode mode_;
    CoefficientFunction coeff_;
    double M_;
    double alpha_ = 0.5;
    std::optional<double> alpha_u_;
    PhiProfile phi_;
    QuadratureOptions quad_;
    PowerLawFormulas formulas_;
    std::shared_ptr<const Tables> tables_;
};

TransformSpec make_powerlaw_spec(double m, double alpha, double M);

} // namespace pmt
