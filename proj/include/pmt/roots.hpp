#pragma once

#include "pmt/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmt {

struct BisectionOptions {
    double rel_tol = 1e-12;
    int max_iter = 200;
};

/// Solves fn(x) = target for a strictly increasing fn on [lo, hi].
/// Stops once the bracket is narrower than rel_tol * max(|lo|, |hi|), or
/// when fn hits the target exactly.
template <class Fn>
double invert_increasing(Fn&& fn, double target, double lo, double hi, BisectionOptions opts = {})
{
    if (!(lo <= hi)) throw std::invalid_argument("bisection: empty bracket");
    const double flo = fn(lo), fhi = fn(hi);
    if (target < flo || target > fhi) throw std::invalid_argument("bisection: target outside [f(lo), f(hi)]");
    if (target == flo) return lo;
    if (target == fhi) return hi;
    for (int it = 0; it < opts.max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) return mid;
        const double fm = fn(mid);
        if (fm == target) return mid;
        if (fm < target)
            lo = mid;
        else
            hi = mid;
        const double scale = std::max(std::abs(lo), std::abs(hi));
        if (hi - lo <= opts.rel_tol * scale) return 0.5 * (lo + hi);
    }
    throw NumericalError("bisection: no convergence within iteration cap");
}

} // namespace pmt
