#include "doctest.h"

#include <cmath>

#include "cgas/errors.hpp"
#include "cgas/estimators.hpp"

using namespace cgas;

namespace {

ModelParams desk_model() {
    ModelParams m;
    m.beta = 2.0;
    m.beta_prime = 1.8;
    m.N = 4;
    m.L_max = 8;
    m.window = Box::centered(6);
    return m;
}

ExperimentSpec quick_spec(int64_t replicas = 20000, uint64_t seed = 9) {
    ExperimentSpec s;
    s.model = desk_model();
    s.replicas = replicas;
    s.seed = seed;
    s.threads = 4;
    return s;
}

}  // namespace

TEST_CASE("resolve model margin rule") {
    ModelParams m = desk_model();
    ResolvedModel rm = resolve_model(m);
    CHECK(rm.margin >= int(rm.D_value + m.L_max / 2.0));
    CHECK(rm.sim_box.width() == rm.window.width() + 2 * rm.margin);

    // an explicit simulation box that violates the margin is rejected
    m.sim_box = rm.window.expanded(2);
    CHECK_THROWS_WITH_AS(resolve_model(m), doctest::Contains("margin"), invalid_parameter);
}

TEST_CASE("estimate_p_gamma matches the analytic window and translation invariance") {
    ExperimentSpec spec = quick_spec(60000);
    ResolvedModel rm = resolve_model(spec.model);

    Contour g1 = Contour::boundary_of_cells({Pt{0, 0}});
    Contour g2 = Contour::boundary_of_cells({Pt{1, 1}});  // a translate, also interior

    PresenceEstimate p1 = estimate_p_gamma(g1, rm.family, spec.process, spec.replicas, 21);
    PresenceEstimate p2 = estimate_p_gamma(g2, rm.family, spec.process, spec.replicas, 22);

    BoundParams bp = rm.bounds;
    Interval bounds = p_gamma_bounds(4, bp);
    CHECK(p1.ci.lo <= bounds.hi);
    CHECK(p1.ci.hi >= bounds.lo);
    // translates agree within joint CI
    CHECK(p1.ci.lo <= p2.ci.hi);
    CHECK(p2.ci.lo <= p1.ci.hi);

    CHECK_THROWS_AS(
        estimate_p_gamma(g1, rm.family, spec.process, 0, 1), invalid_parameter);
}

TEST_CASE("estimate_lambda basics") {
    ExperimentSpec spec = quick_spec();
    LambdaEstimate le = estimate_lambda(spec);
    CHECK(le.lambda_hat > 0);
    CHECK(le.ci.lo <= le.lambda_hat);
    CHECK(le.ci.hi >= le.lambda_hat);
    int64_t total = 0;
    for (int64_t c : le.hist) total += c;
    CHECK(total == spec.replicas);

    // N above L_max: exactly zero
    ExperimentSpec none = spec;
    none.model.N = none.model.L_max + 2;
    LambdaEstimate z = estimate_lambda(none);
    CHECK(z.lambda_hat == 0.0);

    // the analytic |V| bound: |V| <= lambda N e^{(beta+rho)N}
    ResolvedModel rm = resolve_model(spec.model);
    double rhs = le.ci.hi * spec.model.N * std::exp((spec.model.beta + rm.bounds.rho.hi) *
                                                    spec.model.N);
    CHECK(double(rm.window.area()) <= rhs);
}

TEST_CASE("estimate_lambda subadditivity over disjoint windows") {
    ExperimentSpec spec = quick_spec(40000);
    ExperimentSpec left = spec, right = spec, both = spec;
    left.model.window = Box{-3, -3, -1, 2};
    right.model.window = Box{0, -3, 2, 2};
    both.model.window = Box{-3, -3, 2, 2};
    LambdaEstimate ll = estimate_lambda(left);
    LambdaEstimate lr = estimate_lambda(right);
    LambdaEstimate lb = estimate_lambda(both);
    CHECK(lb.ci.lo <= ll.ci.hi + lr.ci.hi);
}

TEST_CASE("lambda bookkeeping identity") {
    // mean total equals the sum of per-contour presence frequencies
    ExperimentSpec spec = quick_spec(5000);
    ResolvedModel rm = resolve_model(spec.model);
    ClanSampler s(rm.family, RootQuery::window(rm.window), spec.process);
    std::unordered_map<uint64_t, int64_t> presence;
    int64_t total = 0;
    for (int64_t r = 0; r < spec.replicas; ++r) {
        Rng rng(derive_seed(spec.seed, 0xC047, uint64_t(r)));
        for (const BasisRef& b : s.sample_eta_zero(rng)) {
            if (b.length < spec.model.N) continue;
            presence[b.key]++;
            total++;
        }
    }
    double sum_p = 0;
    for (auto& [k, c] : presence) sum_p += double(c) / double(spec.replicas);
    CHECK(sum_p == doctest::Approx(double(total) / double(spec.replicas)).epsilon(1e-12));
}

TEST_CASE("size window for lambda") {
    ExperimentSpec spec = quick_spec(20000);
    spec.model.lambda_target = 0.08;
    spec.model.max_window_side = 64;
    WindowSizing ws = size_window_for_lambda(spec);
    CHECK(!ws.trace.empty());
    if (ws.found) {
        CHECK(ws.ci.contains(spec.model.lambda_target));
    } else {
        REQUIRE(ws.upper_window.has_value());
        CHECK(ws.lambda_hat <= spec.model.lambda_target);
        CHECK(ws.upper_lambda_hat >= spec.model.lambda_target);
    }

    // doubling the target roughly doubles the window area
    ExperimentSpec spec2 = spec;
    spec2.model.lambda_target = 0.16;
    WindowSizing ws2 = size_window_for_lambda(spec2);
    double a1 = double(ws.window.area());
    double a2 = double(ws2.window.area());
    CHECK(a2 / a1 > 1.3);
    CHECK(a2 / a1 < 3.2);

    // unreachable target
    ExperimentSpec cap = spec;
    cap.model.lambda_target = 1e9;
    cap.model.max_window_side = 32;
    CHECK_THROWS_AS(size_window_for_lambda(cap), capacity_error);

    // degenerate target below the single-site density: brackets collapse to 1x1
    ExperimentSpec tiny = spec;
    tiny.model.lambda_target = 1e-9;
    WindowSizing wt = size_window_for_lambda(tiny);
    CHECK(wt.window.area() == 1);
}

TEST_CASE("tv experiment smoke") {
    ExperimentSpec spec = quick_spec(30000);
    TvExperimentResult r = tv_experiment(spec);
    CHECK(r.replicas == spec.replicas);
    CHECK(r.lambda_hat > 0);
    CHECK(r.tv.tv >= 0);
    CHECK(r.tv.tv <= 1.0);
    CHECK(r.per_replica.size() == size_t(spec.replicas));
    // desk-scale analytic bound is vacuous here; the verdict must say so
    CHECK(r.pass);
    CHECK(r.pass_by_vacuity == (r.bounds.tv_closed.hi >= 1.0));
    // the rare-contour count law is genuinely near-Poisson
    CHECK(r.tv.tv < 0.05);
    CHECK(r.tv_halves < 0.1);

    // self-consistency: feeding synthetic Poisson draws gives small TV
    Rng rng(3);
    std::vector<int64_t> h;
    for (int64_t i = 0; i < 50000; ++i) {
        int64_t k = rng.poisson(r.lambda_hat);
        if (int64_t(h.size()) <= k) h.resize(k + 1, 0);
        h[k]++;
    }
    CHECK(tv_hist_vs_poisson(h, 50000, r.lambda_hat) < 0.02);

    // N > L_max violates the tv-check precondition
    ExperimentSpec bad = spec;
    bad.model.N = 12;
    bad.model.L_max = 8;
    CHECK_THROWS_WITH_AS(tv_experiment(bad), doctest::Contains("N <= L_max"),
                         invalid_parameter);
}

TEST_CASE("analytic reference mode") {
    ExperimentSpec spec = quick_spec(20000);
    spec.analytic_reference = true;
    TvExperimentResult r = tv_experiment(spec);
    ResolvedModel rm = resolve_model(spec.model);
    CHECK(r.lambda_reference == doctest::Approx(analytic_lambda_midpoint(rm)));
    // midpoint reference sits near the empirical mean
    CHECK(std::fabs(r.lambda_reference - r.lambda_hat) < 0.2 * std::max(r.lambda_hat, 0.01));
}

TEST_CASE("validate lemmas") {
    ExperimentSpec spec = quick_spec(20000);
    spec.model.beta_prime = 1.7;
    LemmaReport rep = validate_lemmas(spec);
    CHECK(rep.checks.size() >= 6);
    for (const LemmaCheck& c : rep.checks) {
        INFO(c.name, " lhs=", c.lhs, " rhs=", c.rhs, " ", c.note);
        CHECK(c.pass);
    }
    CHECK(rep.all_pass);
}
