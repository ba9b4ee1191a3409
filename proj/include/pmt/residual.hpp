#pragma once

// Residuals of the original equation  d_t u = a(u) Lap u + f(u)  and of the
// transformed one  d_t v = div(a(U(v)) grad v) + fbar,  v = V(u),  on exact
// (analytic) and discrete data, plus the refinement study that contrasts them
// at the free boundary.

#include "pmt/barenblatt.hpp"
#include "pmt/grid.hpp"
#include "pmt/holder.hpp"
#include "pmt/transform.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pmt {

struct ResidualReport {
    ScalarField field;
    RegionMask region;
    double sup_norm = 0.0;
    /// Hoelder report of the residual itself (empty when disabled).
    std::optional<HolderReport> holder;
    /// Hoelder reports of the individual terms, keyed by name.
    std::vector<std::pair<std::string, HolderReport>> terms;
    std::string tag;
};

/// How the discrete path evaluates -Phi''(u)|grad u|^2.
enum class FbarDiscretization {
    /// -sign(Phi''(u)) |grad_h G(u)|^2 with G' = sqrt|Phi''|. Bounded at the
    /// free boundary where Phi'' is unbounded.
    GradientPotential,
    /// -Phi''(u_i) |grad_h u|_i^2 node by node.
    ChainRule,
};

struct ResidualOptions {
    double alpha = 0.5;
    bool residual_holder = true;
    bool term_holders = true;
    FbarDiscretization fbar = FbarDiscretization::GradientPotential;
    HolderOptions holder;
};

struct PointResidual {
    std::vector<std::pair<double, double>> points;
    /// d_t V(u) - Lap Phi(u) - fbar
    std::vector<double> divergence_free;
    /// d_t v - div(a(U(v)) grad v) - fbar
    std::vector<double> divergence_form;
    double sup_norm = 0.0;
};

/// Both transformed residuals from the exact Barenblatt derivatives. Every
/// point must lie strictly inside the support.
PointResidual identity_residual_analytic(const BarenblattParams& p, const TransformSpec& spec,
                                         const std::vector<std::pair<double, double>>& points);

/// Uniform (t, x) with t in [t0, t1] and |x| <= margin * support radius.
std::vector<std::pair<double, double>> random_interior_points(const BarenblattParams& p, std::size_t count,
                                                              double t0, double t1, std::uint64_t seed,
                                                              double margin = 0.95);

/// d_t u - a(u) Lap_h u - f(u). Term reports: "dt_u", "a_lap_u".
ResidualReport residual_original(const ScalarField& u, const CoefficientFunction& coeff, const RegionMask& region,
                                 const ResidualOptions& opts = {});

/// d_t v - div_h(a(U(v)) grad_h v) - fbar with face-averaged diffusivity.
/// u defaults to U(v). Term reports: "dt_v", "div_flux", "fbar".
ResidualReport residual_transformed(const ScalarField& v, const TransformSpec& spec, const RegionMask& region,
                                    const ResidualOptions& opts = {}, const ScalarField* u = nullptr);

/// d_t V(u) - Lap_h Phi(u) - fbar. Term reports: "dt_v", "lap_Phi", "fbar".
ResidualReport residual_divergence_free(const ScalarField& u, const TransformSpec& spec, const RegionMask& region,
                                        const ResidualOptions& opts = {});

/// V(u) node by node.
ScalarField apply_transform(const ScalarField& u, const TransformSpec& spec);

/// -Phi''(u)|grad u|^2 + (Phi' f / a)(u) on the grid.
ScalarField discrete_fbar(const ScalarField& u, const TransformSpec& spec, FbarDiscretization kind);

/// Nodes within `cells` grid spacings of the analytic free boundary.
RegionMask interface_band(const SpaceTimeGrid& grid, const BarenblattParams& p, double cells = 3.0);
/// Nodes at least `cells` spacings inside the analytic support.
RegionMask support_interior(const SpaceTimeGrid& grid, const BarenblattParams& p, double cells = 3.0);

// ---------------------------------------------------------------------------
// Refinement study

enum class ScenarioSource { Analytic, Solver, Zero };

struct Scenario {
    std::string name = "custom";
    ScenarioSource source = ScenarioSource::Analytic;
    BarenblattParams params{2.0, 1, 1.0, 0.0};
    double alpha = 0.5;
    double radius = 6.0;
    double t_start = 1.0;
    double t_end = 2.0;
    /// Single-run resolution (solve, psi).
    std::size_t nx = 201;
    std::size_t nt = 0; ///< 0: CFL-matched

    void validate() const;
    KeyValueConfig to_config() const;
    static Scenario from_config(const KeyValueConfig& config);
};

/// Named presets: barenblatt-m2-alpha05, barenblatt-m2, barenblatt-m2-solver, zero.
Scenario scenario_preset(const std::string& name);
std::vector<std::string> scenario_preset_names();

struct Level {
    std::size_t nt = 0;
    std::size_t nx = 0;
};

/// nt so that the time step matches the explicit-scheme bound
/// 0.4 h^2 / (2 d max a(u)) on each spatial resolution.
std::size_t cfl_matched_nt(const Scenario& s, std::size_t nx);
std::vector<Level> cfl_levels(const Scenario& s, const std::vector<std::size_t>& nxs);
/// nx = 101, 201, 401, ... (count entries), CFL-matched.
std::vector<Level> default_levels(const Scenario& s, std::size_t count);

/// The trajectory of a scenario on one level.
ScalarField scenario_field(const Scenario& s, const Level& level);

struct StudyRow {
    std::size_t level = 0;
    std::size_t nt = 0;
    std::size_t nx = 0;
    double sup_res_orig = 0.0;  ///< original residual, support interior
    double sup_res_trans = 0.0; ///< transformed residual, full grid
    double semi_dtu = 0.0;
    double semi_lap_u = 0.0;
    double semi_dtv = 0.0;
    double semi_lap_Phi = 0.0;
    double runtime_s = 0.0;
    double band_lap_u = 0.0;   ///< max |Lap_h u| near the interface
    double band_lap_Phi = 0.0; ///< max |Lap_h Phi(u)| near the interface
};

struct StudyTable {
    std::vector<StudyRow> rows;
    /// `level,nt,nx,sup_res_orig,sup_res_trans,semi_dtu,semi_lap_u,semi_dtv,semi_lap_Phi,runtime_s`
    std::string render_csv(bool with_runtime = true) const;
    /// `level,nx,band_lap_u,band_lap_Phi`
    std::string render_band_csv() const;
};

struct StudyOptions {
    int jobs = 1;
    double band_cells = 3.0;
    HolderOptions holder;
};

/// Requires at least three levels with strictly increasing nt and nx.
StudyTable convergence_study(const Scenario& s, const std::vector<Level>& levels, const StudyOptions& opts = {});

} // namespace pmt
