#pragma once

#include <cmath>

#include "csd/admissibility.hpp"

// Floating-point cross-checks for the exact decision procedure. Kept out of
// admissibility.hpp on purpose: the exact path never touches a double.
namespace csd::admissibility::numeric {

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline double to_double(const ExtendedRational& x, double eps) {
    return to_double(x.q) + to_double(x.k) * eps;
}

// Evaluate the 18 conditions with eps substituted numerically. Strictness is
// applied literally in doubles; intended for soundness spot-checks with eps
// well above roundoff.
inline bool admissible_numeric(const ExponentTuple& t, double eps) {
    const double s0 = to_double(t.s0, eps), s1 = to_double(t.s1, eps), s2 = to_double(t.s2, eps);
    const double b0 = to_double(t.b0, eps), b1 = to_double(t.b1, eps), b2 = to_double(t.b2, eps);
    const double ssum = s0 + s1 + s2;
    return b0 + b1 + b2 > 0.5 && b0 + b1 > 0.0 && b0 + b2 > 0.0 && b1 + b2 > 0.0 &&
           ssum > 1.5 - (b0 + b1 + b2) && ssum > 1.0 - (b0 + b1) && ssum > 1.0 - (b0 + b2) &&
           ssum > 1.0 - (b1 + b2) && ssum > 0.5 - b0 && ssum > 0.5 - b1 && ssum > 0.5 - b2 &&
           ssum > 0.75 && (s0 + b0) + 2.0 * s1 + 2.0 * s2 > 1.0 &&
           2.0 * s0 + (s1 + b1) + 2.0 * s2 > 1.0 && 2.0 * s0 + 2.0 * s1 + (s2 + b2) > 1.0 &&
           s1 + s2 >= std::max(0.0, -b0) && s0 + s2 > std::max(0.0, -b1) &&
           s0 + s1 > std::max(0.0, -b2);
}

/** Brute-force lower-edge finder for an affine family: scan [lo, hi] for the
 * first admissible grid point, then bisect the bracket. Cross-checks
 * threshold_sweep; eps is substituted numerically (default 1e-9). */
inline double threshold_bisect(const TupleFamily& fam, double lo, double hi, double eps = 1e-9,
                               int grid = 4096, int iters = 60) {
    auto adm = [&](double s) {
        const double q0 = to_double(fam.base.s0, eps) + to_double(fam.slope.s0, eps) * s;
        const double q1 = to_double(fam.base.s1, eps) + to_double(fam.slope.s1, eps) * s;
        const double q2 = to_double(fam.base.s2, eps) + to_double(fam.slope.s2, eps) * s;
        const double p0 = to_double(fam.base.b0, eps) + to_double(fam.slope.b0, eps) * s;
        const double p1 = to_double(fam.base.b1, eps) + to_double(fam.slope.b1, eps) * s;
        const double p2 = to_double(fam.base.b2, eps) + to_double(fam.slope.b2, eps) * s;
        const double ssum = q0 + q1 + q2;
        return p0 + p1 + p2 > 0.5 && p0 + p1 > 0.0 && p0 + p2 > 0.0 && p1 + p2 > 0.0 &&
               ssum > 1.5 - (p0 + p1 + p2) && ssum > 1.0 - (p0 + p1) && ssum > 1.0 - (p0 + p2) &&
               ssum > 1.0 - (p1 + p2) && ssum > 0.5 - p0 && ssum > 0.5 - p1 && ssum > 0.5 - p2 &&
               ssum > 0.75 && (q0 + p0) + 2.0 * q1 + 2.0 * q2 > 1.0 &&
               2.0 * q0 + (q1 + p1) + 2.0 * q2 > 1.0 && 2.0 * q0 + 2.0 * q1 + (q2 + p2) > 1.0 &&
               q1 + q2 >= std::max(0.0, -p0) && q0 + q2 > std::max(0.0, -p1) &&
               q0 + q1 > std::max(0.0, -p2);
    };

    double bad = lo, good = hi;
    bool found = false;
    for (int i = 0; i <= grid; ++i) {
        const double s = lo + (hi - lo) * static_cast<double>(i) / grid;
        if (adm(s)) {
            good = s;
            bad = lo + (hi - lo) * static_cast<double>(i - 1) / grid;
            found = true;
            break;
        }
    }
    if (!found) return std::nan("");
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (bad + good);
        (adm(mid) ? good : bad) = mid;
    }
    return 0.5 * (bad + good);
}

}  // namespace csd::admissibility::numeric
