#include "doctest.h"

#include <cmath>

#include "cgas/errors.hpp"
#include "cgas/stats.hpp"

using namespace cgas;

TEST_CASE("wilson interval") {
    Ci ci = wilson_ci(50, 100);
    CHECK(ci.lo < 0.5);
    CHECK(ci.hi > 0.5);
    CHECK(ci.lo > 0.3);
    CHECK(ci.hi < 0.7);
    // zero successes still gives a positive upper end
    Ci z = wilson_ci(0, 1000000);
    CHECK(z.lo <= 1e-12);
    CHECK(z.hi > 0.0);
    CHECK(z.hi < 1e-4);
}

TEST_CASE("regularized gamma and chi2") {
    // P + Q = 1
    for (double a : {0.5, 1.0, 3.5, 10.0})
        for (double x : {0.1, 1.0, 5.0, 20.0})
            CHECK(regularized_gamma_p(a, x) + regularized_gamma_q(a, x) ==
                  doctest::Approx(1.0).epsilon(1e-12));
    // chi2 with 2 df is exponential: sf(x) = e^{-x/2}
    for (double x : {0.5, 2.0, 7.0})
        CHECK(chi2_sf(x, 2) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-10));
    // classic critical value
    CHECK(chi2_sf(6.634896601021213, 1) == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("poisson pmf and cdf") {
    double mean = 1.3;
    double acc = 0;
    for (int k = 0; k <= 40; ++k) {
        acc += poisson_pmf(k, mean);
        CHECK(poisson_cdf(k, mean) == doctest::Approx(acc).epsilon(1e-10));
    }
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(poisson_pmf(0, mean) == doctest::Approx(std::exp(-mean)));
}

TEST_CASE("chi-square gof pooling") {
    // healthy case: exact expected counts give statistic ~ 0
    double mean = 2.0;
    int64_t n = 100000;
    std::vector<int64_t> hist(30, 0);
    int64_t left = n;
    for (int k = 1; k < 30; ++k) {
        hist[k] = int64_t(std::llround(double(n) * poisson_pmf(k, mean)));
        left -= hist[k];
    }
    hist[0] = left;
    GofResult r = chi_square_gof_poisson(hist, n, mean);
    CHECK(!r.degenerate);
    CHECK(r.df >= 3);
    CHECK(r.p_value > 0.5);

    // sparse case: everything pools into one bin -> degenerate, p = 1
    std::vector<int64_t> tiny{100000};
    GofResult d = chi_square_gof_poisson(tiny, 100000, 1e-7);
    CHECK(d.degenerate);
    CHECK(d.p_value == 1.0);
}

TEST_CASE("two-sample ks") {
    Rng rng(11);
    std::vector<double> a, b;
    for (int i = 0; i < 4000; ++i) {
        a.push_back(rng.exponential());
        b.push_back(rng.exponential());
    }
    KsResult same = ks_two_sample(a, b);
    CHECK(same.p_value > 0.01);

    std::vector<double> c;
    for (int i = 0; i < 4000; ++i) c.push_back(2.5 * rng.exponential());
    KsResult diff = ks_two_sample(a, c);
    CHECK(diff.p_value < 1e-6);
}

TEST_CASE("tv against poisson") {
    // empirical distribution equal to the reference: only the tail remains
    double mean = 0.8;
    int64_t n = 1000000;
    std::vector<int64_t> hist;
    int64_t used = 0;
    for (int k = 0; k < 25; ++k) {
        int64_t c = int64_t(std::llround(double(n) * poisson_pmf(k, mean)));
        hist.push_back(c);
        used += c;
    }
    hist[0] += n - used;
    CHECK(tv_hist_vs_poisson(hist, n, mean) < 1e-5);

    // direct-summation oracle for TV(Poisson(1), Poisson(2))
    double direct = 0;
    for (int k = 0; k < 200; ++k)
        direct += std::fabs(poisson_pmf(k, 1.0) - poisson_pmf(k, 2.0));
    direct *= 0.5;
    CHECK(tv_poisson_poisson(1.0, 2.0) == doctest::Approx(direct).epsilon(1e-12));

    // estimator applied to synthetic Poisson(1) draws converges to the
    // direct value against Poisson(2)
    Rng rng(5);
    for (int64_t reps : {20000, 200000}) {
        std::vector<int64_t> h;
        for (int64_t i = 0; i < reps; ++i) {
            int64_t k = rng.poisson(1.0);
            if (int64_t(h.size()) <= k) h.resize(k + 1, 0);
            h[k]++;
        }
        double est = tv_hist_vs_poisson(h, reps, 2.0);
        CHECK(std::fabs(est - direct) < 4.0 / std::sqrt(double(reps)));
    }
}

TEST_CASE("tv estimator is consistent at rate 1/sqrt(n)") {
    // sampling from the reference itself: error should drop ~ sqrt(4)=2x
    Rng rng(17);
    auto run = [&](int64_t reps) {
        std::vector<int64_t> h;
        for (int64_t i = 0; i < reps; ++i) {
            int64_t k = rng.poisson(1.5);
            if (int64_t(h.size()) <= k) h.resize(k + 1, 0);
            h[k]++;
        }
        return tv_hist_vs_poisson(h, reps, 1.5);
    };
    double e1 = 0, e2 = 0;
    for (int t = 0; t < 10; ++t) {
        e1 += run(4000);
        e2 += run(64000);
    }
    CHECK(e2 < e1);  // averaged TV error shrinks with sample size
}

TEST_CASE("bootstrap tv ci") {
    Rng rng(23);
    std::vector<int64_t> h;
    int64_t reps = 20000;
    for (int64_t i = 0; i < reps; ++i) {
        int64_t k = rng.poisson(1.0);
        if (int64_t(h.size()) <= k) h.resize(k + 1, 0);
        h[k]++;
    }
    Rng boot(29);
    TvEstimate e = tv_with_bootstrap_ci(h, reps, 1.0, 100, boot);
    CHECK(e.ci.lo <= e.tv);
    CHECK(e.ci.hi >= e.tv);
    CHECK(e.ci.hi - e.ci.lo < 0.05);
}
