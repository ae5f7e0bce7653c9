#include "doctest.h"

#include <cmath>

#include "cgas/bounds.hpp"
#include "cgas/errors.hpp"

#include "bounds_reference.hpp"

using namespace cgas;

namespace {

// Degenerate-bracket params: rho/rho'/beta* pinned to points so interval
// results can be compared against the scalar reference implementation.
BoundParams point_params(double beta, double bp, int N, double lambda, double rho, double rp,
                         double bstar) {
    BoundParams p;
    p.beta = beta;
    p.beta_prime = bp;
    p.N = N;
    p.lambda = lambda;
    p.rho = Interval::point(rho);
    p.rho_prime = Interval::point(rp);
    p.beta_star.lo = bstar;
    p.beta_star.hi = bstar;
    return p;
}

ref::In ref_of(const BoundParams& p) {
    ref::In r;
    r.d = p.d;
    r.beta = p.beta;
    r.beta_prime = p.beta_prime;
    r.lambda = p.lambda;
    r.N = p.N;
    r.rho = p.rho.lo;
    r.rho_prime = p.rho_prime.lo;
    r.beta_star = p.beta_star.lo;
    r.eps = p.epsilon_value();
    r.D = p.D_value();
    return r;
}

// Twelve significant digits between the scalar reference and the interval
// midpoint, and the reference must sit inside the (slightly slackened)
// certified enclosure.
bool close12(double a, Interval b) {
    double scale = std::max(std::fabs(a), std::fabs(b.mid()));
    return std::fabs(a - b.mid()) <= 1e-12 * scale && a >= b.lo - 1e-9 * scale &&
           a <= b.hi + 1e-9 * scale;
}

}  // namespace

TEST_CASE("interval arithmetic is outward and ordered") {
    Interval a(1.0, 2.0), b(3.0, 4.0);
    Interval s = a + b;
    CHECK(s.lo <= 4.0);
    CHECK(s.hi >= 6.0);
    Interval d = a - b;
    CHECK(d.lo <= -3.0);
    CHECK(d.hi >= -1.0);
    Interval m = a * b;
    CHECK(m.lo <= 3.0);
    CHECK(m.hi >= 8.0);
    Interval q = a / b;
    CHECK(q.lo <= 0.25);
    CHECK(q.hi >= 2.0 / 3.0);
    CHECK_THROWS_AS(a / Interval(-1.0, 1.0), invalid_parameter);

    // widening inputs can only widen outputs
    Interval wide(0.5, 2.5);
    Interval mw = wide * b;
    CHECK(mw.lo <= m.lo);
    CHECK(mw.hi >= m.hi);
}

TEST_CASE("dual implementations agree to 12 digits on a grid") {
    int points = 0;
    for (double beta : {1.8, 2.0, 2.2, 2.4, 2.6})
        for (double gap : {0.15, 0.2, 0.3, 0.4})
            for (int N : {4, 6, 8, 10, 12}) {
                double bp = beta - gap;
                BoundParams p = point_params(beta, bp, N, 1.0, 0.0008, 0.004, 1.37);
                ref::In r = ref_of(p);
                CHECK(close12(ref::k_const(r), k_constant(p)));
                CHECK(close12(ref::delta_const(r), delta_choice(p)));
                CHECK(close12(ref::q_const(r), q_constant(p)));
                CHECK(close12(ref::a_const(r), a_constant(p)));
                CHECK(close12(ref::m_const(r), M_constant(p)));
                CHECK(close12(ref::b1(r), b1_bound(p)));
                CHECK(close12(ref::b2(r), b2_bound(p)));
                B3Result b3 = b3_bound(p);
                CHECK(close12(ref::b3_general(r), b3.general));
                REQUIRE(b3.simplified.has_value());
                CHECK(close12(ref::b3_simplified(r), *b3.simplified));
                BoundReport rep = tv_bound(p);
                CHECK(close12(ref::tv_closed(r), rep.tv_closed));
                points++;
            }
    CHECK(points == 100);
}

TEST_CASE("closed form dominates the assembled route at proof choices") {
    for (double beta : {1.8, 2.0, 2.2, 2.4, 2.6})
        for (double gap : {0.15, 0.2, 0.3, 0.4})
            for (int N : {4, 6, 8, 10, 12}) {
                BoundParams p = point_params(beta, beta - gap, N, 1.0, 0.0008, 0.004, 1.37);
                BoundReport rep = tv_bound(p);
                CHECK(rep.closed_dominates_assembled);
                CHECK(rep.tv_closed.hi >= rep.assembled.hi);
                CHECK(rep.assembled.hi ==
                      doctest::Approx((2.0 * (2.0 * rep.b1 + 2.0 * rep.b2 +
                                              *rep.b3_simplified)).hi));
            }
}

TEST_CASE("p_gamma bounds") {
    BoundParams p = point_params(2.0, 1.8, 8, 1.0, 0.0008, 0.004, 1.37);
    CHECK_THROWS_AS(p_gamma_bounds(6, p), invalid_parameter);  // below N
    Interval b = p_gamma_bounds(8, p);
    CHECK(b.lo <= std::exp(-(2.0 + 0.0008) * 8));
    CHECK(b.hi >= std::exp(-2.0 * 8));
    CHECK(b.lo <= b.hi);

    // rho = 0 collapses the interval to the upper end
    BoundParams p0 = point_params(2.0, 1.8, 8, 1.0, 0.0, 0.004, 1.37);
    Interval c = p_gamma_bounds(8, p0);
    CHECK(c.lo == doctest::Approx(c.hi).epsilon(1e-12));

    // large beta: both ends vanish
    BoundParams pb = point_params(40.0, 39.0, 8, 1.0, 0.0, 0.0, 1.37);
    CHECK(p_gamma_bounds(8, pb).hi < 1e-100);
}

TEST_CASE("pair bound") {
    BoundParams p = point_params(2.0, 1.8, 4, 1.0, 0.0008, 0.004, 1.37);
    double b = pair_bound(4, 6, 0.01, 0.002, p);
    CHECK(b == doctest::Approx(0.01 * std::exp(-12.0) + 0.002 * std::exp(-8.0)));
    CHECK(pair_bound(5, 7, 0.3, 0.4, p) == doctest::Approx(pair_bound(7, 5, 0.4, 0.3, p)));
    CHECK_THROWS_AS(pair_bound(0, 4, 0.1, 0.1, p), invalid_parameter);
}

TEST_CASE("b1 monotonicity and scaling") {
    // strictly decreasing in N once the exponent dominates the N prefactor
    BoundParams p = point_params(2.0, 1.8, 20, 1.0, 0.0008, 0.004, 1.37);
    p.D = 10.0;
    double prev = 1e300;
    for (int N : {20, 24, 28, 32}) {
        p.N = N;
        double v = b1_bound(p).hi;
        CHECK(v < prev);
        prev = v;
    }
    // linear in lambda
    p.N = 20;
    double v1 = b1_bound(p).hi;
    p.lambda = 3.0;
    CHECK(b1_bound(p).hi == doctest::Approx(3.0 * v1).epsilon(1e-12));
}

TEST_CASE("b2 relations") {
    BoundParams p = point_params(2.0, 1.8, 8, 1.0, 0.0008, 0.004, 1.37);
    p.D = 25.0;
    // b2 - b1 reduces to lambda ((D+1)/eps)^d d^d e^{-(beta-beta*-eps)N}
    double eps = p.epsilon_value();
    double s = p.beta - p.beta_star.lo;
    double expected = 1.0 * std::pow((25.0 + 1.0) / eps, 2) * 4.0 * std::exp(-(s - eps) * 8);
    CHECK(b2_bound(p).hi - b1_bound(p).hi == doctest::Approx(expected).epsilon(1e-9));

    // monotone increasing in D
    double prev = 0;
    for (double D : {5.0, 10.0, 20.0, 40.0}) {
        p.D = D;
        double v = b2_bound(p).lo;
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("b3 limits") {
    BoundParams p = point_params(2.0, 1.8, 8, 1.0, 0.0008, 0.004, 1.37);
    // D -> infinity: the second term dies, leaving 2 lambda e^{-(beta-beta')N}
    p.D = 4000.0;
    double v = b3_bound(p).general.hi;
    CHECK(v == doctest::Approx(2.0 * std::exp(-0.2 * 8)).epsilon(1e-6));
    // rho' >= 1 is rejected
    BoundParams bad = point_params(2.0, 1.8, 8, 1.0, 0.0008, 1.0, 1.37);
    CHECK_THROWS_AS(b3_bound(bad), invalid_parameter);
}

TEST_CASE("A constant grows with dimension") {
    BoundParams p2 = point_params(2.0, 1.8, 8, 1.0, 0.0008, 0.004, 1.37);
    BoundParams p3 = p2;
    p3.d = 3;
    CHECK(a_constant(p3).lo > a_constant(p2).hi);
}

TEST_CASE("delta choice") {
    BoundParams p = point_params(2.0, 1.8, 8, 1.0, 0.0008, 0.004, 1.37);
    CHECK(delta_choice(p).lo > 1.0);
    // decreasing in the gap beta - beta'
    double prev = 0;
    for (double bp : {1.5, 1.6, 1.7, 1.8}) {
        // beta' up means the gap beta - beta' shrinks, so delta grows
        BoundParams q = point_params(2.0, bp, 8, 1.0, 0.0008, 0.004, 1.37);
        double v = delta_choice(q).hi;
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("M constant blows up at both ends of beta'") {
    double bstar = 1.37;
    auto M = [&](double bp) {
        return M_constant(point_params(2.0, bp, 8, 1.0, 0.0008, 0.004, bstar)).lo;
    };
    double near_star = M(bstar + 0.01);
    double mid = M(1.7);
    double near_beta = M(1.99);
    CHECK(near_star > mid);
    CHECK(near_beta > mid);
}

TEST_CASE("tv bound report") {
    BoundParams p = point_params(2.0, 1.8, 8, 1.0, 0.0008, 0.004, 1.37);
    BoundReport r = tv_bound(p);
    // doubling lambda doubles both routes
    BoundParams p2 = p;
    p2.lambda = 2.0;
    BoundReport r2 = tv_bound(p2);
    CHECK(r2.tv_closed.hi == doctest::Approx(2.0 * r.tv_closed.hi).epsilon(1e-12));
    CHECK(r2.assembled.hi == doctest::Approx(2.0 * r.assembled.hi).epsilon(1e-12));

    // N -> infinity: the bound vanishes
    BoundParams pN = p;
    pN.N = 400;
    CHECK(tv_bound(pN).tv_closed.hi < 1e-10);
    BoundParams pM = p;
    pM.N = 200;
    CHECK(tv_bound(pN).tv_closed.hi < tv_bound(pM).tv_closed.lo);

    // default epsilon violates the strictest proof-side condition here
    CHECK(!r.epsilon_strict_ok);
    BoundParams ps = p;
    ps.epsilon = 0.05;  // eps*d = 0.1 < beta - beta' = 0.2
    CHECK(tv_bound(ps).epsilon_strict_ok);
}

TEST_CASE("interval params propagate monotonically") {
    BoundParams narrow = point_params(2.0, 1.8, 8, 1.0, 0.0008, 0.004, 1.37);
    narrow.rho = Interval(0.0007, 0.0008);
    narrow.rho_prime = Interval(0.003, 0.004);
    narrow.beta_star = BetaStarBracket{1.30, 1.37, false, 0, 0};
    BoundParams wide = narrow;
    wide.rho = Interval(0.0006, 0.0009);
    wide.rho_prime = Interval(0.002, 0.005);
    wide.beta_star = BetaStarBracket{1.25, 1.40, false, 0, 0};
    // keep epsilon fixed so only the brackets widen
    narrow.epsilon = 0.3;
    wide.epsilon = 0.3;
    narrow.D = 40.0;
    wide.D = 40.0;

    auto check_wider = [](Interval n, Interval w) {
        CHECK(w.lo <= n.lo);
        CHECK(w.hi >= n.hi);
    };
    check_wider(b1_bound(narrow), b1_bound(wide));
    check_wider(b2_bound(narrow), b2_bound(wide));
    check_wider(b3_bound(narrow).general, b3_bound(wide).general);
    check_wider(M_constant(narrow), M_constant(wide));
    check_wider(delta_choice(narrow), delta_choice(wide));
}

TEST_CASE("params validation") {
    BoundParams p = point_params(2.0, 1.8, 8, 1.0, 0.0008, 0.004, 1.37);
    p.validate();

    BoundParams bad = p;
    bad.beta_prime = 1.3;  // below the beta* bracket
    CHECK_THROWS_AS(bad.validate(), invalid_parameter);

    bad = p;
    bad.N = 3;
    CHECK_THROWS_AS(bad.validate(), invalid_parameter);

    bad = p;
    bad.lambda = 0.0;
    CHECK_THROWS_AS(bad.validate(), invalid_parameter);

    bad = p;
    bad.epsilon = 100.0;  // above d(beta+rho)
    CHECK_THROWS_AS(bad.validate(), invalid_parameter);

    // from_model wires certified brackets in
    BoundParams fm = BoundParams::from_model(2.0, 1.8, 8, 1.0, 16);
    fm.validate();
    CHECK(fm.rho.lo > 0);
    CHECK(fm.rho.hi < 0.001);
    CHECK(fm.beta_star.hi < 1.8);
}
