#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace pmt::quad {

/// Five-point Gauss-Legendre rule on [-1, 1]; exact for degree 9.
inline constexpr std::array<double, 5> gl5_nodes = {
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144,  0.9061798459386639927976269,
};
inline constexpr std::array<double, 5> gl5_weights = {
    0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
    0.4786286704993664680412915, 0.2369268850561890875142640,
};

/// int_a^b fn(x) dx with a single five-point panel. The rule never samples
/// the endpoints, so integrable endpoint singularities are tolerated.
template <class Fn>
double gl5(Fn&& fn, double a, double b)
{
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t j = 0; j < gl5_nodes.size(); ++j) s += gl5_weights[j] * fn(mid + half * gl5_nodes[j]);
    return half * s;
}

/// Power-graded nodes k_j = top * (j / panels)^grading, j = 0..panels.
/// Grading > 1 clusters nodes at 0 where the transform integrands degenerate.
class GradedMesh {
public:
    GradedMesh(double top, std::size_t panels, double grading);

    std::size_t panels() const { return panels_; }
    double top() const { return top_; }
    double grading() const { return grading_; }
    double node(std::size_t j) const { return nodes_[j]; }
    double to_k(double s) const;
    double dk_ds(double s) const;
    double to_s(double k) const;
    /// Panel j with node(j) <= k <= node(j+1); clamped to the last panel.
    std::size_t panel_of(double k) const;

    /// int_{node(j)}^{k} fn(x) dx computed in the graded variable s.
    template <class Fn>
    double integrate_from_node(Fn&& fn, std::size_t j, double k) const
    {
        const double s0 = static_cast<double>(j) / static_cast<double>(panels_);
        const double s1 = to_s(k);
        if (s1 <= s0) return 0.0;
        return gl5([&](double s) { return fn(to_k(s)) * dk_ds(s); }, s0, s1);
    }

    /// Cumulative table T[j] = int_0^{node(j)} fn.
    template <class Fn>
    std::vector<double> cumulative(Fn&& fn) const
    {
        std::vector<double> t(panels_ + 1, 0.0);
        for (std::size_t j = 0; j < panels_; ++j) t[j + 1] = t[j] + integrate_from_node(fn, j, nodes_[j + 1]);
        return t;
    }

private:
    double top_;
    std::size_t panels_;
    double grading_;
    std::vector<double> nodes_;
};

} // namespace pmt::quad
