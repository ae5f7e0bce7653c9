#pragma once

#include <optional>

#include "cgas/alpha0.hpp"
#include "cgas/interval.hpp"

namespace cgas {

// Inputs for the analytic error terms. rho/rho_prime/beta_star are certified
// brackets, so every derived constant comes out as an interval.
struct BoundParams {
    int d = 2;
    double beta = 0;
    double beta_prime = 0;
    int N = 0;
    double lambda = 1.0;
    std::optional<double> D;        // default: delta_choice upper end * N
    std::optional<double> epsilon;  // default: beta_prime - beta_star.hi
    BetaStarBracket beta_star;
    Interval rho;        // alpha0(beta) bracket
    Interval rho_prime;  // alpha0(beta_prime) bracket

    // Computes the alpha0/beta* brackets at the given truncation depth and
    // validates all invariants.
    static BoundParams from_model(double beta, double beta_prime, int N, double lambda,
                                  int L_max, const AnchorSpec& anchor = {});

    void validate() const;         // throws invalid_parameter
    double epsilon_value() const;  // explicit epsilon or the default rule
    double D_value() const;        // explicit D or delta_hi * N
    // Strictest epsilon admissibility from the proof: eps * d < beta - beta'.
    bool epsilon_strict_ok() const;
};

Interval p_gamma_bounds(int length, const BoundParams& p);
double pair_bound(int len1, int len2, double p1_up, double p2_up, const BoundParams& p);

Interval b1_bound(const BoundParams& p);
Interval b2_bound(const BoundParams& p);

Interval delta_choice(const BoundParams& p);
Interval q_constant(const BoundParams& p);
Interval a_constant(const BoundParams& p);
Interval k_constant(const BoundParams& p);
Interval M_constant(const BoundParams& p);

struct B3Result {
    Interval general;                    // two-term display at the used D
    std::optional<Interval> simplified;  // closed display, present iff D = delta*N
};
B3Result b3_bound(const BoundParams& p);

// Everything in one report: derived constants, the three error terms at the
// used (epsilon, D), the assembled 2(2b1+2b2+b3) at the proof's parameter
// choices, and the closed-form theorem bound; both values are reported and
// their consistency is checked at matched parameter corners.
struct BoundReport {
    int d = 2;
    double beta = 0, beta_prime = 0, lambda = 0;
    int N = 0;
    double beta_star_lo = 0, beta_star_hi = 0;
    Interval rho, rho_prime;
    Interval K, delta, Q, A, M;
    double epsilon_used = 0, D_used = 0;
    bool epsilon_strict_ok = true;  // false => header-only condition (warning)
    Interval b1, b2, b3_general;
    std::optional<Interval> b3_simplified;
    Interval assembled;  // 2(2b1+2b2+b3) at eps = beta'-beta*, D = delta N
    Interval tv_closed;  // M N^{d+1} lambda e^{-(beta-beta')N}
    bool closed_dominates_assembled = false;
};

BoundReport tv_bound(const BoundParams& p);

}  // namespace cgas
