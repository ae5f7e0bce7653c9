#include "cgas/alpha0.hpp"

#include <cmath>

#include "cgas/errors.hpp"

namespace cgas {

static constexpr double kLog3 = 1.0986122886681098;  // ln(2d-1), d = 2

double alpha0_tail(double beta, int L_max) {
    if (beta <= kLog3)
        throw invalid_parameter("alpha0 tail diverges for beta <= ln 3; got beta = " +
                                std::to_string(beta));
    // sum_{n >= m} n r^n = r^m (m - (m-1) r) / (1-r)^2 with m = L_max + 1
    double r = 3.0 * std::exp(-beta);
    double m = double(L_max) + 1.0;
    return std::pow(r, m) * (m - (m - 1.0) * r) / ((1.0 - r) * (1.0 - r));
}

double alpha0_lower(double beta, int L_max, const AnchorSpec& anchor) {
    const auto& counts = anchored_length_counts(anchor.mode, L_max);
    double head = 0;
    for (int n = L_max; n >= 4; --n)
        if (counts[n]) head += double(counts[n]) * std::exp(-beta * n);
    return head;
}

Alpha0Bounds alpha0_bounds(double beta, int L_max, const AnchorSpec& anchor) {
    Alpha0Bounds b;
    b.beta = beta;
    b.L_max = L_max;
    b.tail = alpha0_tail(beta, L_max);  // throws for beta <= ln 3
    b.lower = alpha0_lower(beta, L_max, anchor);
    b.upper = b.lower + b.tail;
    return b;
}

BetaStarBracket beta_star_bracket(double tolerance, int L_max, const AnchorSpec& anchor) {
    if (tolerance <= 0) throw invalid_parameter("beta_star_bracket: tolerance must be > 0");
    BetaStarBracket out;
    out.tolerance = tolerance;
    out.L_max = L_max;

    // Warm the enumeration cache once; both bisections reuse it.
    (void)anchored_length_counts(anchor.mode, L_max);

    // lo: largest certified beta with head(beta) >= 1 (head is finite and
    // strictly decreasing for all beta > 0).
    double a = 1e-3, b = 8.0;
    if (alpha0_lower(a, L_max, anchor) < 1.0) {
        out.lo = 0.0;  // head never reaches 1: vacuous but certified
    } else {
        for (int it = 0; it < 200 && (b - a) > tolerance * 0.25; ++it) {
            double mid = 0.5 * (a + b);
            (alpha0_lower(mid, L_max, anchor) >= 1.0 ? a : b) = mid;
        }
        out.lo = a;
    }

    // hi: smallest certified beta with head(beta) + tail(beta) <= 1; the tail
    // bound blows up at ln 3, so hi always sits above ln 3.
    a = kLog3 + 1e-9;
    b = 8.0;
    auto upper = [&](double beta) {
        return alpha0_lower(beta, L_max, anchor) + alpha0_tail(beta, L_max);
    };
    if (upper(b) > 1.0)
        throw invalid_parameter("beta_star_bracket: upper bound still above 1 at beta = 8");
    for (int it = 0; it < 200 && (b - a) > tolerance * 0.25; ++it) {
        double mid = 0.5 * (a + b);
        (upper(mid) <= 1.0 ? b : a) = mid;
    }
    out.hi = b;
    out.meets_tolerance = (out.hi - out.lo) <= tolerance;
    return out;
}

}  // namespace cgas
