#include "cgas/bounds.hpp"

#include <cmath>

#include "cgas/errors.hpp"

namespace cgas {

namespace {
double log_odd(int d) { return std::log(double(2 * d - 1)); }
double dd_pow(int d) { return std::pow(double(d), d); }
}  // namespace

BoundParams BoundParams::from_model(double beta, double beta_prime, int N, double lambda,
                                    int L_max, const AnchorSpec& anchor) {
    BoundParams p;
    p.beta = beta;
    p.beta_prime = beta_prime;
    p.N = N;
    p.lambda = lambda;
    p.beta_star = beta_star_bracket(0.05, L_max, anchor);
    Alpha0Bounds r = alpha0_bounds(beta, L_max, anchor);
    Alpha0Bounds rp = alpha0_bounds(beta_prime, L_max, anchor);
    p.rho = Interval(r.lower, r.upper);
    p.rho_prime = Interval(rp.lower, rp.upper);
    p.validate();
    return p;
}

void BoundParams::validate() const {
    if (d < 2) throw invalid_parameter("bounds: d must be >= 2");
    if (N < 4) throw invalid_parameter("bounds: N must be >= 4");
    if (lambda <= 0) throw invalid_parameter("bounds: lambda must be > 0");
    if (!(beta_prime < beta))
        throw invalid_parameter("bounds: need beta_prime < beta");
    if (!(beta_prime > beta_star.hi))
        throw invalid_parameter(
            "bounds: beta_prime must exceed the certified beta* bracket upper end (" +
            std::to_string(beta_star.hi) + ")");
    if (rho.lo < 0 || rho_prime.lo < 0)
        throw invalid_parameter("bounds: alpha0 brackets must be nonnegative");
    double eps = epsilon_value();
    if (eps <= 0) throw invalid_parameter("bounds: epsilon must be > 0");
    if (eps > d * (beta + rho.lo))
        throw invalid_parameter("bounds: epsilon out of admissible range (> d(beta+rho))");
    if (D_value() <= 0) throw invalid_parameter("bounds: D must be > 0");
}

double BoundParams::epsilon_value() const {
    if (epsilon) return *epsilon;
    return beta_prime - beta_star.hi;
}

double BoundParams::D_value() const {
    if (D) return *D;
    return delta_choice(*this).hi * N;
}

bool BoundParams::epsilon_strict_ok() const {
    return epsilon_value() * d < beta - beta_prime;
}

Interval p_gamma_bounds(int length, const BoundParams& p) {
    if (length < p.N)
        throw invalid_parameter("p_gamma_bounds: length " + std::to_string(length) +
                                " below N = " + std::to_string(p.N));
    double lo = std::exp(-(p.beta + p.rho.hi) * length);
    double hi = std::exp(-p.beta * length);
    return detail::widen(lo, hi, 4);
}

double pair_bound(int len1, int len2, double p1_up, double p2_up, const BoundParams& p) {
    if (len1 <= 0 || len2 <= 0) throw invalid_parameter("pair_bound: lengths must be positive");
    return p1_up * std::exp(-p.beta * len2) + p2_up * std::exp(-p.beta * len1);
}

Interval k_constant(const BoundParams& p) {
    Interval m = p.beta + p.rho;
    return m / (p.beta - p.beta_prime) + Interval::point(1.0);
}

Interval delta_choice(const BoundParams& p) {
    Interval m = p.beta + p.rho;
    Interval s = Interval::point(p.beta) - Interval(p.beta_star.lo, p.beta_star.hi);
    Interval inner = 1.0 + log_odd(p.d) * (1.0 / s + 1.0 / m);
    return (m / (p.beta - p.beta_prime)) * inner + Interval::point(1.0);
}

Interval q_constant(const BoundParams& p) {
    if (p.rho_prime.hi >= 1.0)
        throw invalid_parameter("q_constant: alpha0(beta') not certified below 1");
    Interval m = p.beta + p.rho;
    double g = p.beta - p.beta_prime;
    double odd = double(2 * p.d - 1);
    Interval one_minus_rp = 1.0 - p.rho_prime;
    return (4.0 * odd * odd / (g * g)) * m / isqr(one_minus_rp);
}

Interval a_constant(const BoundParams& p) {
    Interval m = p.beta + p.rho;
    return k_constant(p) * m * Interval::point(log_odd(p.d));
}

Interval M_constant(const BoundParams& p) {
    if (p.rho_prime.hi >= 1.0)
        throw invalid_parameter("M_constant: alpha0(beta') not certified below 1");
    Interval m = p.beta + p.rho;
    double g = p.beta - p.beta_prime;
    Interval eps_star = Interval::point(p.beta_prime) - Interval(p.beta_star.lo, p.beta_star.hi);
    if (eps_star.lo <= 0)
        throw invalid_parameter("M_constant: beta_prime not strictly above beta* bracket");
    Interval one_minus_rp = 1.0 - p.rho_prime;
    Interval head = ipow(m, p.d) / std::pow(g, 2 * p.d + 2);
    Interval tail = Interval::point(dd_pow(p.d)) / ipow(eps_star, p.d) +
                    Interval::point(2.0 * log_odd(p.d) * log_odd(p.d)) / isqr(one_minus_rp);
    return 10.0 * head * tail;
}

namespace {

// b1/b2 at explicit (eps, D); D may be an interval (the proof choice delta*N).
Interval b1_eval(const BoundParams& p, double eps, Interval D) {
    Interval m = p.beta + p.rho;
    Interval s = Interval::point(p.beta) - Interval(p.beta_star.lo, p.beta_star.hi);
    Interval neigh = ipow((D + Interval::point(1.0)) / eps, p.d);
    Interval decay = iexp((Interval::point(eps) - s) * double(p.N));
    return (2.0 * p.lambda * p.N) * (m / s) * neigh * decay;
}

Interval b2_eval(const BoundParams& p, double eps, Interval D) {
    Interval m = p.beta + p.rho;
    Interval s = Interval::point(p.beta) - Interval(p.beta_star.lo, p.beta_star.hi);
    Interval neigh = ipow((D + Interval::point(1.0)) / eps, p.d);
    Interval decay = iexp((Interval::point(eps) - s) * double(p.N));
    return p.lambda * neigh * ((2.0 * p.N) * (m / s) + Interval::point(dd_pow(p.d))) * decay;
}

Interval b3_simplified_eval(const BoundParams& p) {
    if (p.rho_prime.hi >= 1.0)
        throw invalid_parameter("b3_bound: alpha0(beta') not certified below 1");
    Interval m = p.beta + p.rho;
    double g = p.beta - p.beta_prime;
    Interval one_minus_rp = 1.0 - p.rho_prime;
    double npow = std::pow(double(p.N), p.d + 1);
    double decay = std::exp(-g * p.N);
    return (4.0 * p.lambda * npow * decay / std::pow(g, 2 * p.d + 2)) * ipow(m, p.d) /
           isqr(one_minus_rp);
}

// Plain-double evaluation of both bound routes at one consistent parameter
// point (used for the closed-form-dominates-assembled check at matched
// corners of the input brackets).
struct PointEval {
    int d;
    double beta, bp, N, lambda, rho, rp, bstar;

    double g() const { return beta - bp; }
    double m() const { return beta + rho; }
    double s() const { return beta - bstar; }
    double eps() const { return bp - bstar; }
    double delta() const {
        return (m() / g()) * (1.0 + log_odd(d) * (1.0 / s() + 1.0 / m())) + 1.0;
    }
    double b1() const {
        double D = delta() * N;
        return 2.0 * lambda * N * (m() / s()) * std::pow((D + 1.0) / eps(), d) *
               std::exp(-(s() - eps()) * N);
    }
    double b2() const {
        double D = delta() * N;
        return lambda * std::pow((D + 1.0) / eps(), d) * (2.0 * N * (m() / s()) + dd_pow(d)) *
               std::exp(-(s() - eps()) * N);
    }
    double b3() const {
        return 4.0 * lambda * std::pow(m(), d) * std::pow(N, d + 1) * std::exp(-g() * N) /
               ((1.0 - rp) * (1.0 - rp) * std::pow(g(), 2 * d + 2));
    }
    double assembled() const { return 2.0 * (2.0 * b1() + 2.0 * b2() + b3()); }
    double closed() const {
        double M = 10.0 * std::pow(m(), d) / std::pow(g(), 2 * d + 2) *
                   (dd_pow(d) / std::pow(eps(), d) +
                    2.0 * log_odd(d) * log_odd(d) / ((1.0 - rp) * (1.0 - rp)));
        return M * std::pow(N, d + 1) * lambda * std::exp(-g() * N);
    }
};

}  // namespace

Interval b1_bound(const BoundParams& p) {
    p.validate();
    return b1_eval(p, p.epsilon_value(), Interval::point(p.D_value()));
}

Interval b2_bound(const BoundParams& p) {
    p.validate();
    return b2_eval(p, p.epsilon_value(), Interval::point(p.D_value()));
}

B3Result b3_bound(const BoundParams& p) {
    p.validate();
    if (p.rho_prime.hi >= 1.0)
        throw invalid_parameter("b3_bound: alpha0(beta') not certified below 1");
    double g = p.beta - p.beta_prime;
    double D = p.D_value();
    Interval q = q_constant(p);
    Interval a = a_constant(p);
    Interval grow = iexp(a * double(p.N));
    Interval second = q * (p.N * p.lambda * std::pow(D, p.d) * std::exp(-g * D)) * grow;
    B3Result out;
    out.general = Interval::point(2.0 * p.lambda * std::exp(-g * p.N)) + second;

    Interval deltaN = delta_choice(p) * double(p.N);
    if (!p.D.has_value() || (D >= deltaN.lo * (1 - 1e-12) && D <= deltaN.hi * (1 + 1e-12)))
        out.simplified = b3_simplified_eval(p);
    return out;
}

BoundReport tv_bound(const BoundParams& p) {
    p.validate();
    BoundReport r;
    r.d = p.d;
    r.beta = p.beta;
    r.beta_prime = p.beta_prime;
    r.lambda = p.lambda;
    r.N = p.N;
    r.beta_star_lo = p.beta_star.lo;
    r.beta_star_hi = p.beta_star.hi;
    r.rho = p.rho;
    r.rho_prime = p.rho_prime;
    r.K = k_constant(p);
    r.delta = delta_choice(p);
    r.Q = q_constant(p);
    r.A = a_constant(p);
    r.M = M_constant(p);
    r.epsilon_used = p.epsilon_value();
    r.D_used = p.D_value();
    r.epsilon_strict_ok = p.epsilon_strict_ok();

    B3Result b3 = b3_bound(p);
    r.b1 = b1_bound(p);
    r.b2 = b2_bound(p);
    r.b3_general = b3.general;
    r.b3_simplified = b3.simplified;

    // Assembled route at the proof's parameter choices: eps = beta'-beta*
    // (upper bracket end for the default), D = delta N.
    double eps_star = p.beta_prime - p.beta_star.hi;
    Interval deltaN = r.delta * double(p.N);
    Interval b1a = b1_eval(p, eps_star, deltaN);
    Interval b2a = b2_eval(p, eps_star, deltaN);
    Interval b3a = b3_simplified_eval(p);
    r.assembled = 2.0 * (2.0 * b1a + 2.0 * b2a + b3a);

    double g = p.beta - p.beta_prime;
    double closed_pt = std::pow(double(p.N), p.d + 1) * p.lambda * std::exp(-g * p.N);
    r.tv_closed = r.M * Interval::point(closed_pt);

    // Consistency of the two routes, checked at matched corners of the
    // (rho, rho', beta*) brackets with epsilon tied to the corner's beta*.
    bool ok = true;
    for (int corner = 0; corner < 3; ++corner) {
        PointEval pe;
        pe.d = p.d;
        pe.beta = p.beta;
        pe.bp = p.beta_prime;
        pe.N = p.N;
        pe.lambda = p.lambda;
        if (corner == 0) {
            pe.rho = p.rho.lo;
            pe.rp = p.rho_prime.lo;
            pe.bstar = p.beta_star.lo;
        } else if (corner == 1) {
            pe.rho = p.rho.hi;
            pe.rp = p.rho_prime.hi;
            pe.bstar = p.beta_star.hi;
        } else {
            pe.rho = p.rho.mid();
            pe.rp = p.rho_prime.mid();
            pe.bstar = 0.5 * (p.beta_star.lo + p.beta_star.hi);
        }
        ok = ok && pe.assembled() <= pe.closed();
    }
    r.closed_dominates_assembled = ok;
    return r;
}

}  // namespace cgas
