#pragma once

#include <functional>
#include <memory>
#include <string>

namespace pmt {

using ScalarFn = std::function<double(double)>;

/// Diffusion coefficient a and reaction f of  d_t u = a(u) Lap u + f(u).
///
/// a must vanish only at 0, be nondecreasing on [0, M] and nonincreasing on
/// [-M, 0]; validate_on() samples those conditions.
class CoefficientFunction {
public:
    /// a(u) = m |u|^{1-1/m}, f = 0. Both Hoelder exponents are 1 - 1/m.
    static CoefficientFunction power_law(double m);
    /// A null reaction means f = 0.
    static CoefficientFunction custom(ScalarFn a, ScalarFn f, double alpha_a, double alpha_f,
                                      std::string name = "custom");

    double a(double k) const;
    double f(double k) const;
    double alpha_a() const { return alpha_a_; }
    double alpha_f() const { return alpha_f_; }
    const std::string& name() const { return name_; }

    bool is_power_law() const { return power_m_ > 0.0; }
    /// Nonlinearity exponent; throws for custom coefficients.
    double m() const;
    bool reaction_free() const { return !f_; }

    /// Sampled check of a(0) = 0, a > 0 off zero and the monotonicity
    /// conditions on a sign-symmetric grid of 2*samples+1 points in [-M, M].
    void validate_on(double M, int samples = 256) const;

private:
    CoefficientFunction() = default;

    ScalarFn a_;
    ScalarFn f_;
    double alpha_a_ = 0.5;
    double alpha_f_ = 0.5;
    double power_m_ = 0.0;
    std::string name_;
};

/// alpha = min(alpha_a, alpha_f) * alpha_u
double derived_alpha(const CoefficientFunction& coeff, double alpha_u);

} // namespace pmt
