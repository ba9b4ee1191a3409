#pragma once

// Explicit finite differences for  d_t u = a(u) Lap u + f(u)  with Dirichlet
// data on [-R, R] (1D) or r = R (radial, symmetric at r = 0).
//
// Power-law coefficients are marched in the standard variable
// s = u |u|^{1/m-1}:  s^{n+1} = s^n + dt Lap_h(u^n)  with a conservative
// stencil, then mapped back. The update is monotone under the same step
// bound as the plain scheme and conserves the discrete mass of s, so the
// free boundary moves. Other coefficients use
// u^{n+1} = u^n + dt (a(u^n) Lap_h u^n + f(u^n))  directly.

#include "pmt/barenblatt.hpp"
#include "pmt/coefficient.hpp"
#include "pmt/grid.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace pmt {

/// u_Gamma(t, x) at the boundary points x = -R, R (1D) or x = R (radial).
using BoundaryFn = std::function<double(double t, double x)>;

enum class SchemeKind { Auto, StandardForm, NonDivergence };

class PMEProblem {
public:
    /// A null boundary function means u_Gamma = 0. Requires u_Gamma(t_start, .)
    /// to equal u0 at the boundary nodes exactly.
    PMEProblem(CoefficientFunction coeff, double radius, std::size_t nx, int dim, double t_start, double t_end,
               std::vector<double> u0, BoundaryFn boundary = {});

    /// Barenblatt initial data at t_start; the boundary trace is the oracle
    /// itself (zero while the support stays inside).
    static PMEProblem barenblatt(const BarenblattParams& p, double radius, std::size_t nx, double t_start,
                                 double t_end);

    const CoefficientFunction& coeff() const { return coeff_; }
    double radius() const { return radius_; }
    std::size_t nx() const { return nx_; }
    int dim() const { return dim_; }
    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    double h() const { return h_; }
    double x(std::size_t i) const;
    bool radial() const { return dim_ > 1; }
    const std::vector<double>& u0() const { return u0_; }
    double boundary(double t, double x) const { return boundary_ ? boundary_(t, x) : 0.0; }
    /// Indices of Dirichlet nodes: both ends in 1D, the outer node radially.
    std::vector<std::size_t> boundary_nodes() const;

    double cfl_factor = 0.4;
    SchemeKind scheme = SchemeKind::Auto;

    bool uses_standard_form() const;

private:
    CoefficientFunction coeff_;
    double radius_;
    std::size_t nx_;
    int dim_;
    double t_start_;
    double t_end_;
    double h_;
    std::vector<double> u0_;
    BoundaryFn boundary_;
};

/// cfl_factor * h^2 / (2 d max(a(u), 1e-12)) over the layer.
double cfl_dt(const PMEProblem& problem, const std::vector<double>& layer, double h);

/// Layer Laplacian: 3-point in 1D; f_rr + (d-1)/r f_r radially with
/// d f_rr(0) at the origin. Entries at Dirichlet nodes are 0.
std::vector<double> layer_laplacian(const std::vector<double>& layer, double h, int dim);

/// One step from time t to t + dt. Rejects dt above cfl_dt; throws
/// NumericalError on non-finite output.
std::vector<double> step_explicit(const std::vector<double>& layer, const PMEProblem& problem, double t, double dt);

struct SolveStats {
    std::size_t steps = 0;
    double min_dt = 0.0;
    double max_dt = 0.0;
};

/// Marches to t_end with dt = cfl_dt per step, shortening steps so every
/// output time is hit exactly (nt_output uniform layers including both ends).
ScalarField solve(const PMEProblem& problem, std::size_t nt_output, SolveStats* stats = nullptr);

struct CompatibilityReport {
    bool pass = true;
    double max_defect = 0.0;
    double tolerance = 0.0;
    std::size_t nodes_checked = 0;
    double alpha = 0.0;
};

/// Compares a(u0) Lap u0 + f(u0) with d_t u_Gamma(t_start) at boundary nodes
/// where u0 != 0. Tolerance 10 (h^2 + dt) with dt = cfl_dt(u0).
CompatibilityReport compatibility_check(const PMEProblem& problem, double alpha);

} // namespace pmt
