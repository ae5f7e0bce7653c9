#pragma once

#include <memory>
#include <optional>
#include <string>

#include "cgas/bounds.hpp"
#include "cgas/engine.hpp"
#include "cgas/exact_gibbs.hpp"
#include "cgas/stats.hpp"

namespace cgas {

// Model geometry and temperatures shared by all experiments.
struct ModelParams {
    int d = 2;
    double beta = 2.0;
    double beta_prime = 1.8;
    int N = 8;
    double lambda_target = 1.0;
    int L_max = 16;
    std::optional<Box> window;   // V
    std::optional<Box> sim_box;  // simulation box; default: V + margin
    std::optional<double> D;     // dependence-neighborhood radius; default delta*N
    AnchorSpec anchor;
    Norm norm = Norm::euclid;
    int max_window_side = 4096;
};

struct ExperimentSpec {
    ModelParams model;
    int64_t replicas = 10000;
    uint64_t seed = 1;
    int threads = 0;  // 0 = hardware concurrency
    int bootstrap_rounds = 200;
    bool analytic_reference = false;  // Poisson mean from analytic midpoints
    ProcessParams process;
};

// Window family plus derived analytic inputs, with the margin rule
// (sim box at least D + L_max/2 beyond the window) enforced.
struct ResolvedModel {
    std::shared_ptr<const WindowFamily> family;
    Box window;
    Box sim_box;
    double D_value = 0;
    int margin = 0;
    BoundParams bounds;
};
ResolvedModel resolve_model(const ModelParams& m);

struct PresenceEstimate {
    double estimate = 0;
    Ci ci;  // Wilson, 99%
    int64_t hits = 0;
    int64_t replicas = 0;
};
// Fraction of perfect samples containing gamma.
PresenceEstimate estimate_p_gamma(const Contour& gamma, std::shared_ptr<const FamilyModel> fam,
                                  const ProcessParams& pp, int64_t replicas, uint64_t seed,
                                  int threads = 0);

struct LambdaEstimate {
    double lambda_hat = 0;
    Ci ci;
    int64_t replicas = 0;
    std::vector<int64_t> hist;  // hist[k] = #replicas with k matching contours
};
// Mean number of contours with length >= N present at time zero and
// intersecting the window.
LambdaEstimate estimate_lambda(const ExperimentSpec& spec);

struct WindowSizing {
    bool found = false;          // a window whose CI contains the target
    Box window;                  // chosen window (or lower bracket)
    double lambda_hat = 0;
    Ci ci;
    std::optional<Box> upper_window;  // bracketing window when !found
    double upper_lambda_hat = 0;
    Ci upper_ci;
    struct TracePoint {
        int side;
        double lambda_hat;
        Ci ci;
    };
    std::vector<TracePoint> trace;
};
// Smallest square window whose estimated mean count CI contains the target,
// or the two bracketing windows. Throws capacity_error when the target
// cannot be reached below model.max_window_side.
WindowSizing size_window_for_lambda(const ExperimentSpec& spec);

struct TvExperimentResult {
    int64_t replicas = 0;
    double lambda_hat = 0;
    Ci lambda_ci;
    double lambda_reference = 0;  // Poisson mean actually used
    TvEstimate tv;                // total-count projection (lower-bounds process TV)
    double tv_halves = 0;         // two half-window 2-D projection, reported
    double half_lambda[2] = {0, 0};
    BoundReport bounds;
    bool pass = false;
    bool pass_by_vacuity = false;  // analytic bound >= 1
    std::vector<int64_t> hist;
    std::vector<int64_t> per_replica;  // totals, CSV export
};
TvExperimentResult tv_experiment(const ExperimentSpec& spec);

struct LemmaCheck {
    std::string name;
    bool pass = false;
    double lhs = 0;  // observed / empirical side
    double rhs = 0;  // bound side
    std::string note;
};
struct LemmaReport {
    std::vector<LemmaCheck> checks;
    bool all_pass = true;
};
// Empirical and exact spot checks of the analytic lemmas: presence
// probabilities inside their two-sided bounds, the pair-probability bound,
// the clan-coupling incompatibility bound, and an assembled-vs-analytic b1.
LemmaReport validate_lemmas(const ExperimentSpec& spec);

// Shared helper: analytic sum of length-filtered rates over a region
// using interval midpoints of the presence bounds.
double analytic_lambda_midpoint(const ResolvedModel& rm);

}  // namespace cgas
