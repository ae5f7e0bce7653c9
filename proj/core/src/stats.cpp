#include "cgas/stats.hpp"

#include <algorithm>
#include <cmath>

#include "cgas/errors.hpp"

namespace cgas {

Ci wilson_ci(int64_t successes, int64_t n, double z) {
    if (n <= 0) throw invalid_parameter("wilson_ci: n must be positive");
    double p = double(successes) / double(n);
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * double(n) * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

Ci normal_ci(double mean, double sd, int64_t n, double z) {
    if (n <= 0) throw invalid_parameter("normal_ci: n must be positive");
    double half = z * sd / std::sqrt(double(n));
    return {mean - half, mean + half};
}

// Regularized incomplete gamma by series / continued fraction.
static double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

static double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double regularized_gamma_p(double a, double x) {
    if (a <= 0 || x < 0) throw invalid_parameter("regularized_gamma_p: bad arguments");
    if (x == 0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (a <= 0 || x < 0) throw invalid_parameter("regularized_gamma_q: bad arguments");
    if (x == 0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_sf(double x, int df) {
    if (df <= 0) throw invalid_parameter("chi2_sf: df must be positive");
    if (x <= 0) return 1.0;
    return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double poisson_pmf(int64_t k, double mean) {
    if (k < 0) return 0.0;
    if (mean <= 0) return k == 0 ? 1.0 : 0.0;
    return std::exp(double(k) * std::log(mean) - mean - std::lgamma(double(k) + 1.0));
}

double poisson_cdf(int64_t k, double mean) {
    if (k < 0) return 0.0;
    if (mean <= 0) return 1.0;
    return regularized_gamma_q(double(k) + 1.0, mean);
}

GofResult chi_square_gof_poisson(const std::vector<int64_t>& hist, int64_t n, double mean,
                                 double min_expected) {
    GofResult r;
    if (n <= 0) throw invalid_parameter("chi_square_gof_poisson: no samples");

    // Expected counts per value, with an explicit right tail bin.
    int kmax = int(hist.size());
    std::vector<double> expected(kmax + 1, 0.0);
    std::vector<int64_t> observed(kmax + 1, 0);
    for (int k = 0; k < kmax; ++k) {
        expected[k] = double(n) * poisson_pmf(k, mean);
        observed[k] = hist[k];
    }
    expected[kmax] = double(n) * (1.0 - poisson_cdf(kmax - 1, mean));

    // Pool from the right until every bin carries at least min_expected.
    std::vector<double> e;
    std::vector<int64_t> o;
    double e_acc = 0;
    int64_t o_acc = 0;
    for (int k = kmax; k >= 0; --k) {
        e_acc += expected[k];
        o_acc += observed[k];
        if (e_acc >= min_expected || k == 0) {
            e.push_back(e_acc);
            o.push_back(o_acc);
            e_acc = 0;
            o_acc = 0;
        }
    }
    if (e.size() >= 2 && e.back() < min_expected) {
        // Leftmost bin came up short: pool it into its neighbor.
        e[e.size() - 2] += e.back();
        o[o.size() - 2] += o.back();
        e.pop_back();
        o.pop_back();
    }

    r.bins = int(e.size());
    if (r.bins < 2) {
        r.degenerate = true;
        r.stat = 0;
        r.df = 0;
        r.p_value = 1.0;
        return r;
    }
    double stat = 0;
    for (size_t i = 0; i < e.size(); ++i) {
        double diff = double(o[i]) - e[i];
        stat += diff * diff / e[i];
    }
    r.stat = stat;
    r.df = r.bins - 1;
    r.p_value = chi2_sf(stat, r.df);
    return r;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw invalid_parameter("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    size_t i = 0, j = 0;
    double d = 0;
    const double na = double(a.size()), nb = double(b.size());
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(double(i) / na - double(j) / nb));
    }
    double ne = na * nb / (na + nb);
    double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    if (lam < 1e-6) {
        KsResult r;
        r.d = d;
        r.p_value = 1.0;
        return r;
    }
    double p = 0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
        p += term;
        if (std::fabs(term) < 1e-12) break;
    }
    KsResult r;
    r.d = d;
    r.p_value = std::min(1.0, std::max(0.0, p));
    return r;
}

double tv_hist_vs_poisson(const std::vector<int64_t>& hist, int64_t n, double mean) {
    if (n <= 0) throw invalid_parameter("tv_hist_vs_poisson: no samples");
    double acc = 0;
    for (size_t k = 0; k < hist.size(); ++k)
        acc += std::fabs(double(hist[k]) / double(n) - poisson_pmf(int64_t(k), mean));
    acc += 1.0 - poisson_cdf(int64_t(hist.size()) - 1, mean);  // reference tail mass
    return 0.5 * acc;
}

double tv_poisson_poisson(double mean1, double mean2) {
    double acc = 0;
    int64_t kmax = int64_t(std::ceil(std::max(mean1, mean2) + 60.0 * std::sqrt(std::max(mean1, mean2) + 1.0)));
    for (int64_t k = 0; k <= kmax; ++k)
        acc += std::fabs(poisson_pmf(k, mean1) - poisson_pmf(k, mean2));
    return 0.5 * acc;
}

TvEstimate tv_with_bootstrap_ci(const std::vector<int64_t>& hist, int64_t n, double mean,
                                int bootstrap_rounds, Rng& rng, double z) {
    TvEstimate out;
    out.mean_used = mean;
    out.tv = tv_hist_vs_poisson(hist, n, mean);
    if (bootstrap_rounds < 2) {
        out.ci = {out.tv, out.tv};
        return out;
    }
    // Resample n replica values from the empirical cdf; the reference mean
    // is re-estimated per resample.
    std::vector<double> cum(hist.size());
    double run = 0;
    for (size_t k = 0; k < hist.size(); ++k) {
        run += double(hist[k]);
        cum[k] = run;
    }
    std::vector<double> tvs(bootstrap_rounds);
    std::vector<int64_t> re(hist.size());
    for (int b = 0; b < bootstrap_rounds; ++b) {
        std::fill(re.begin(), re.end(), 0);
        int64_t total = 0;
        for (int64_t i = 0; i < n; ++i) {
            size_t k = rng.categorical(cum);
            re[k]++;
            total += int64_t(k);
        }
        double mean_star = double(total) / double(n);
        tvs[b] = tv_hist_vs_poisson(re, n, mean_star);
    }
    double m = 0;
    for (double v : tvs) m += v;
    m /= bootstrap_rounds;
    double var = 0;
    for (double v : tvs) var += (v - m) * (v - m);
    var /= std::max(1, bootstrap_rounds - 1);
    double half = z * std::sqrt(var);
    out.ci = {std::max(0.0, out.tv - half), out.tv + half};
    return out;
}

}  // namespace cgas
