#pragma once

#include "cgas/enumerate.hpp"

namespace cgas {

// Certified two-sided bounds on alpha0(beta) = sum over anchored contours of
// exp(-beta * length). lower = enumerated head up to L_max; upper adds the
// counting-bound tail sum_{n > L_max} n 3^n exp(-beta n).
struct Alpha0Bounds {
    double lower = 0;
    double upper = 0;
    double tail = 0;
    double beta = 0;
    int L_max = 0;
};

// Closed form of the tail bound; requires beta > ln 3 (else the geometric
// series diverges and the bound is useless).
double alpha0_tail(double beta, int L_max);

Alpha0Bounds alpha0_bounds(double beta, int L_max, const AnchorSpec& anchor = {});

// Head sum only; finite for every beta > 0.
double alpha0_lower(double beta, int L_max, const AnchorSpec& anchor = {});

// A certified bracket [lo, hi] containing the root of alpha0 = 1:
// alpha0_lower(lo) >= 1 and alpha0_upper(hi) <= 1. The bracket width is
// limited from below by the truncation gap at the given L_max; when that gap
// exceeds the tolerance the widest certified bracket is still returned, with
// meets_tolerance = false (a report, not a failure).
struct BetaStarBracket {
    double lo = 0;
    double hi = 0;
    bool meets_tolerance = false;
    double tolerance = 0;
    int L_max = 0;
};

BetaStarBracket beta_star_bracket(double tolerance, int L_max,
                                  const AnchorSpec& anchor = {});

}  // namespace cgas
