#include "pmt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmt::quad {

GradedMesh::GradedMesh(double top, std::size_t panels, double grading)
    : top_(top), panels_(panels), grading_(grading)
{
    if (!(top > 0.0)) throw std::invalid_argument("graded mesh: top must be > 0");
    if (panels < 1) throw std::invalid_argument("graded mesh: need at least one panel");
    if (!(grading >= 1.0)) throw std::invalid_argument("graded mesh: grading must be >= 1");
    nodes_.resize(panels + 1);
    for (std::size_t j = 0; j <= panels; ++j) nodes_[j] = to_k(static_cast<double>(j) / static_cast<double>(panels));
    nodes_.back() = top;
}

double GradedMesh::to_k(double s) const
{
    return top_ * std::pow(s, grading_);
}

double GradedMesh::dk_ds(double s) const
{
    return top_ * grading_ * std::pow(s, grading_ - 1.0);
}

double GradedMesh::to_s(double k) const
{
    return std::pow(std::clamp(k / top_, 0.0, 1.0), 1.0 / grading_);
}

std::size_t GradedMesh::panel_of(double k) const
{
    if (k <= 0.0) return 0;
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), k);
    std::size_t j = static_cast<std::size_t>(it - nodes_.begin());
    j = j == 0 ? 0 : j - 1;
    return std::min(j, panels_ - 1);
}

} // namespace pmt::quad
