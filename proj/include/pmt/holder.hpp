#pragma once

// Discrete anisotropic Hoelder norms C^{(beta/2, beta)} on grid fields.
//
// Seminorms are suprema of |f(p) - f(q)| / d(p, q)^beta over node pairs with
// the parabolic distance d = max(|t - s|^{1/2}, |x - y|). Every estimate is
// a lower bound of the continuum seminorm; growth under refinement is
// therefore conclusive, boundedness is evidence.

#include "pmt/coefficient.hpp"
#include "pmt/grid.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pmt {

struct HolderOptions {
    /// Regions up to this size use every node pair.
    std::size_t exhaustive_limit = 5000;
    /// Larger regions: all pairs among this many seeded random nodes ...
    std::size_t sample_nodes = 5000;
    std::uint64_t seed = 0x5EED;
    /// ... plus every pair within a few cells of each other in space or time.
    bool local_pairs = true;
    int local_space_window = 3;
    int local_time_window = 3;
};

struct HolderReport {
    double exponent = 1.0;
    RegionMask region;
    double sup_norm = 0.0;
    double seminorm = 0.0;
    double norm = 0.0;
    std::size_t pairs_sampled = 0;
    /// False when the region was subsampled; the seminorm is then a lower
    /// bound of the full discrete seminorm.
    bool exhaustive = true;

    /// Flat `key = value` block.
    std::string render() const;
};

double parabolic_distance(double t, double x, double s, double y);

HolderReport holder_seminorm(const ScalarField& f, double beta, const RegionMask& region,
                             const HolderOptions& opts = {});

struct ClassicalNormTerms {
    double sup_f = 0.0;
    double sup_grad = 0.0;
    double sup_lap = 0.0;
    double sup_dt = 0.0;
    double semi_dt = 0.0;
    double semi_lap = 0.0;

    double total() const { return sup_f + sup_grad + sup_lap + sup_dt + semi_dt + semi_lap; }
};

/// Discrete C^{(1+alpha/2, 2+alpha)} norm: sup norms of f, grad f, Lap f and
/// d_t f plus the alpha-seminorms of d_t f and Lap f over the region. Mixed
/// intermediate seminorms are left out. The region must span at least four
/// time layers and four spatial nodes.
ClassicalNormTerms parabolic_norm_2plus_terms(const ScalarField& f, double alpha, const RegionMask& region,
                                              const HolderOptions& opts = {});
double parabolic_norm_2plus(const ScalarField& f, double alpha, const RegionMask& region,
                            const HolderOptions& opts = {});

/// ||g||_{C^beta[lo, hi]} from `samples` uniform points (all pairs).
double holder_norm_1d(const ScalarFn& g, double lo, double hi, double beta, int samples = 512);

struct PsiExponents {
    double alpha_a = 0.5;
    double alpha_f = 0.5;
    double alpha_u = 0.5;
    double alpha = 0.25;
};

/// Level-set regularity profile. Thresholds are kept in the order given
/// (callers pass them descending). Component vectors refer to the {u >= k}
/// side.
struct PsiProfile {
    std::vector<double> k;
    std::vector<double> psi_plus;
    std::vector<double> psi_minus;
    std::vector<double> holder_u;  ///< ||u||_{C^{(alpha_u/2, alpha_u)}({u >= k})}
    std::vector<double> norm_2plus; ///< discrete ||u||_{C^{(1+alpha/2, 2+alpha)}({u >= k})}, NaN if too thin

    /// `k,psi_plus,psi_minus`
    std::string render_csv() const;
};

/// With include_traces, the initial layer and the spatial boundary columns
/// of u act as u_0 and u_Gamma.
PsiProfile psi_profile(const ScalarField& u, const CoefficientFunction& coeff, const PsiExponents& exps,
                       const std::vector<double>& thresholds, bool include_traces = false,
                       const HolderOptions& opts = {});

} // namespace pmt
