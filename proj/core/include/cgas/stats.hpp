#pragma once

#include <cstdint>
#include <vector>

#include "cgas/rng.hpp"

namespace cgas {

inline constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

struct Ci {
    double lo = 0;
    double hi = 0;
    bool contains(double v) const { return lo <= v && v <= hi; }
};

// Wilson score interval for a binomial proportion.
Ci wilson_ci(int64_t successes, int64_t n, double z = kZ99);

// mean +- z * sd / sqrt(n)
Ci normal_ci(double mean, double sd, int64_t n, double z = kZ99);

double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);
double chi2_sf(double x, int df);

double poisson_pmf(int64_t k, double mean);
double poisson_cdf(int64_t k, double mean);

// Chi-square goodness of fit of an observed count histogram against the
// Poisson(mean) pmf. Bins are pooled from the right until every expected
// count reaches min_expected (Cochran's rule); when pooling leaves fewer
// than two bins the test has no resolution and is reported as degenerate
// with p = 1.
struct GofResult {
    double stat = 0;
    int df = 0;
    double p_value = 1;
    int bins = 0;
    bool degenerate = false;
};
GofResult chi_square_gof_poisson(const std::vector<int64_t>& hist, int64_t n, double mean,
                                 double min_expected = 5.0);

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
struct KsResult {
    double d = 0;
    double p_value = 1;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Total variation distance between the empirical law of a count histogram
// (hist[k] = #replicas with total k, n replicas) and Poisson(mean); the
// reference mass beyond the histogram support is included.
double tv_hist_vs_poisson(const std::vector<int64_t>& hist, int64_t n, double mean);

// Plain discrete TV between two pmfs given on 0..K plus their tails.
double tv_poisson_poisson(double mean1, double mean2);

// Bootstrap CI for tv_hist_vs_poisson: resamples the histogram, re-estimates
// the Poisson mean from the resample, and takes +-z * sd of the bootstrap
// distribution around the plug-in estimate.
struct TvEstimate {
    double tv = 0;
    Ci ci;
    double mean_used = 0;
};
TvEstimate tv_with_bootstrap_ci(const std::vector<int64_t>& hist, int64_t n, double mean,
                                int bootstrap_rounds, Rng& rng, double z = kZ99);

}  // namespace cgas
