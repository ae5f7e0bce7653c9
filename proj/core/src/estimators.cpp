#include "cgas/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "cgas/errors.hpp"

namespace cgas {

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return int(std::min(std::max(hc, 1u), 16u));
}

// Runs `body(state[slot], replica)` for every replica on a fixed number of
// slots; replica ranges are contiguous per slot and every replica derives
// its own rng, so results do not depend on the slot count.
template <typename State, typename Make, typename Body>
std::vector<State> parallel_replicas(int64_t replicas, int threads, Make make, Body body) {
    int t = int(std::max<int64_t>(1, std::min<int64_t>(threads, replicas)));
    std::vector<State> states;
    states.reserve(t);
    for (int i = 0; i < t; ++i) states.push_back(make(i));
    std::vector<std::thread> pool;
    int64_t chunk = (replicas + t - 1) / t;
    for (int i = 0; i < t; ++i) {
        int64_t lo = i * chunk, hi = std::min<int64_t>(replicas, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, i, lo, hi]() {
            for (int64_t r = lo; r < hi; ++r) body(states[size_t(i)], r);
        });
    }
    for (auto& th : pool) th.join();
    return states;
}

}  // namespace

ResolvedModel resolve_model(const ModelParams& m) {
    if (m.d != 2) throw invalid_parameter("model: simulation is implemented for d = 2");
    if (!m.window) throw invalid_parameter("model: window V is required");
    if (m.window->empty()) throw invalid_parameter("model: window V is empty");

    ResolvedModel rm;
    rm.window = *m.window;
    rm.bounds = BoundParams::from_model(m.beta, m.beta_prime, m.N, m.lambda_target, m.L_max,
                                        m.anchor);
    rm.D_value = m.D ? *m.D : rm.bounds.D_value();
    rm.margin = int(std::ceil(rm.D_value + m.L_max / 2.0));
    if (m.sim_box) {
        rm.sim_box = *m.sim_box;
        const Box& w = rm.window;
        const Box& s = rm.sim_box;
        int have = std::min(std::min(w.xmin - s.xmin, s.xmax - w.xmax),
                            std::min(w.ymin - s.ymin, s.ymax - w.ymax));
        if (have < rm.margin)
            throw invalid_parameter(
                "model: simulation box margin " + std::to_string(have) +
                " violates the margin rule (need >= D + L_max/2 = " +
                std::to_string(rm.margin) + ")");
    } else {
        rm.sim_box = rm.window.expanded(rm.margin);
    }
    rm.family = std::make_shared<WindowFamily>(m.L_max, rm.sim_box, m.beta);
    return rm;
}

double analytic_lambda_midpoint(const ResolvedModel& rm) {
    Box region[1] = {rm.window};
    auto counts = rm.family->placement_count_by_length(region);
    double beta = rm.bounds.beta;
    double rho_hi = rm.bounds.rho.hi;
    double lam = 0;
    for (int n = rm.bounds.N; n < int(counts.size()); ++n)
        if (counts[n])
            lam += double(counts[n]) * 0.5 *
                   (std::exp(-(beta + rho_hi) * n) + std::exp(-beta * n));
    return lam;
}

PresenceEstimate estimate_p_gamma(const Contour& gamma, std::shared_ptr<const FamilyModel> fam,
                                  const ProcessParams& pp, int64_t replicas, uint64_t seed,
                                  int threads) {
    if (replicas <= 0) throw invalid_parameter("estimate_p_gamma: replicas must be positive");
    uint64_t key = fam->resolve(gamma).key;
    struct State {
        std::unique_ptr<ClanSampler> sampler;
        int64_t hits = 0;
    };
    auto states = parallel_replicas<State>(
        replicas, resolve_threads(threads),
        [&](int) {
            State s;
            s.sampler = std::make_unique<ClanSampler>(fam, RootQuery::basis_set({gamma}), pp);
            return s;
        },
        [&](State& s, int64_t r) {
            Rng rng(derive_seed(seed, 0x70AD, uint64_t(r)));
            for (const BasisRef& b : s.sampler->sample_eta_zero(rng))
                if (b.key == key) {
                    s.hits++;
                    break;
                }
        });
    PresenceEstimate out;
    out.replicas = replicas;
    for (const auto& s : states) out.hits += s.hits;
    out.estimate = double(out.hits) / double(replicas);
    out.ci = wilson_ci(out.hits, replicas);
    return out;
}

namespace {

struct CountsOut {
    std::vector<int64_t> per_replica;
    std::vector<int64_t> hist;
    std::map<std::pair<int, int>, int64_t> halves;
    double half_mean[2] = {0, 0};
    double mean = 0, sd = 0;
};

CountsOut run_counts(const ExperimentSpec& spec, const ResolvedModel& rm) {
    const Box w = rm.window;
    int32_t xmid = int32_t((int64_t(w.xmin) + w.xmax) / 2);
    const Box left{w.xmin, w.ymin, xmid, w.ymax};
    const Box right{xmid + 1, w.ymin, w.xmax, w.ymax};
    const int minlen = rm.bounds.N;

    struct State {
        std::unique_ptr<ClanSampler> sampler;
        std::vector<int64_t> hist;
        std::map<std::pair<int, int>, int64_t> halves;
        int64_t half_sum[2] = {0, 0};
    };
    CountsOut out;
    out.per_replica.assign(size_t(spec.replicas), 0);

    auto states = parallel_replicas<State>(
        spec.replicas, resolve_threads(spec.threads),
        [&](int) {
            State s;
            s.sampler = std::make_unique<ClanSampler>(rm.family, RootQuery::window(rm.window),
                                                      spec.process);
            return s;
        },
        [&](State& s, int64_t r) {
            Rng rng(derive_seed(spec.seed, 0xC047, uint64_t(r)));
            int total = 0, k1 = 0, k2 = 0;
            Box lb[1] = {left}, rb[1] = {right};
            for (const BasisRef& b : s.sampler->sample_eta_zero(rng)) {
                if (b.length < minlen) continue;
                total++;
                if (rm.family->touches_boxes(b, lb)) k1++;
                if (rm.family->touches_boxes(b, rb)) k2++;
            }
            out.per_replica[size_t(r)] = total;
            if (int(s.hist.size()) <= total) s.hist.resize(total + 1, 0);
            s.hist[total]++;
            s.halves[{k1, k2}]++;
            s.half_sum[0] += k1;
            s.half_sum[1] += k2;
        });

    int64_t half_tot[2] = {0, 0};
    for (const auto& s : states) {
        if (s.hist.size() > out.hist.size()) out.hist.resize(s.hist.size(), 0);
        for (size_t k = 0; k < s.hist.size(); ++k) out.hist[k] += s.hist[k];
        for (const auto& [kk, c] : s.halves) out.halves[kk] += c;
        half_tot[0] += s.half_sum[0];
        half_tot[1] += s.half_sum[1];
    }
    if (out.hist.empty()) out.hist.push_back(spec.replicas);

    double n = double(spec.replicas);
    double sum = 0, sumsq = 0;
    for (size_t k = 0; k < out.hist.size(); ++k) {
        sum += double(k) * out.hist[k];
        sumsq += double(k) * double(k) * out.hist[k];
    }
    out.mean = sum / n;
    out.sd = spec.replicas > 1 ? std::sqrt(std::max(0.0, (sumsq - sum * sum / n) / (n - 1))) : 0;
    out.half_mean[0] = double(half_tot[0]) / n;
    out.half_mean[1] = double(half_tot[1]) / n;
    return out;
}

double tv_halves_vs_product(const std::map<std::pair<int, int>, int64_t>& halves, int64_t n,
                            double lam1, double lam2) {
    int k1max = 0, k2max = 0;
    for (const auto& [kk, c] : halves) {
        k1max = std::max(k1max, kk.first);
        k2max = std::max(k2max, kk.second);
    }
    k1max += int(10 + 10 * std::sqrt(lam1 + 1));
    k2max += int(10 + 10 * std::sqrt(lam2 + 1));
    double acc = 0;
    for (int a = 0; a <= k1max; ++a)
        for (int b = 0; b <= k2max; ++b) {
            double q = poisson_pmf(a, lam1) * poisson_pmf(b, lam2);
            auto it = halves.find({a, b});
            double p = it == halves.end() ? 0.0 : double(it->second) / double(n);
            acc += std::fabs(p - q);
        }
    double grid_q = poisson_cdf(k1max, lam1) * poisson_cdf(k2max, lam2);
    return 0.5 * (acc + (1.0 - grid_q));
}

}  // namespace

LambdaEstimate estimate_lambda(const ExperimentSpec& spec) {
    if (spec.replicas <= 0) throw invalid_parameter("estimate_lambda: replicas must be positive");
    ResolvedModel rm = resolve_model(spec.model);
    CountsOut counts = run_counts(spec, rm);
    LambdaEstimate out;
    out.replicas = spec.replicas;
    out.lambda_hat = counts.mean;
    out.ci = normal_ci(counts.mean, counts.sd, spec.replicas);
    out.hist = std::move(counts.hist);
    return out;
}

WindowSizing size_window_for_lambda(const ExperimentSpec& spec) {
    const ModelParams& m = spec.model;
    if (m.lambda_target <= 0)
        throw invalid_parameter("size_window_for_lambda: lambda target must be > 0");

    auto lambda_for_side = [&](int side) {
        ExperimentSpec s = spec;
        s.model.window = Box::centered(side);
        s.model.sim_box.reset();
        s.seed = derive_seed(spec.seed, 0x517E, uint64_t(side));
        return estimate_lambda(s);
    };

    // Analytic initial guess from the presence-bound midpoints.
    auto analytic = [&](int side) {
        ModelParams mm = m;
        mm.window = Box::centered(side);
        mm.sim_box.reset();
        return analytic_lambda_midpoint(resolve_model(mm));
    };
    if (analytic(m.max_window_side) < m.lambda_target)
        throw capacity_error("size_window_for_lambda: target " +
                             std::to_string(m.lambda_target) +
                             " unreachable below max window side " +
                             std::to_string(m.max_window_side));
    int lo = 1, hi = m.max_window_side;
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (analytic(mid) >= m.lambda_target)
            hi = mid;
        else
            lo = mid + 1;
    }
    int side = lo;

    WindowSizing out;
    std::map<int, LambdaEstimate> seen;
    auto eval = [&](int s) -> const LambdaEstimate& {
        auto it = seen.find(s);
        if (it == seen.end()) {
            it = seen.emplace(s, lambda_for_side(s)).first;
            out.trace.push_back({s, it->second.lambda_hat, it->second.ci});
        }
        return it->second;
    };

    for (int iter = 0; iter < 24; ++iter) {
        const LambdaEstimate& est = eval(side);
        if (est.ci.contains(m.lambda_target)) {
            // smallest side whose CI still contains the target
            while (side > 1 && eval(side - 1).ci.contains(m.lambda_target)) --side;
            out.found = true;
            out.window = Box::centered(side);
            out.lambda_hat = seen.at(side).lambda_hat;
            out.ci = seen.at(side).ci;
            return out;
        }
        int next;
        if (est.lambda_hat <= 0)
            next = std::min(m.max_window_side, side * 2);
        else {
            double scale = std::sqrt(m.lambda_target / est.lambda_hat);
            next = int(std::lround(double(side) * scale));
            next = std::clamp(next, 1, m.max_window_side);
        }
        if (next == side) next = est.lambda_hat < m.lambda_target ? side + 1 : side - 1;
        if (next < 1 || next > m.max_window_side) break;
        side = next;
    }

    // No CI contained the target: report the tightest bracketing windows.
    int below = -1, above = -1;
    for (const auto& [s, est] : seen) {
        if (est.lambda_hat < m.lambda_target) below = s;  // map is side-ascending
        if (est.lambda_hat >= m.lambda_target && above < 0) above = s;
    }
    if (below < 0 && above >= 0) below = above;  // degenerate target below side-1 density
    if (above < 0 && below >= 0) above = below;
    if (below < 0)
        throw capacity_error("size_window_for_lambda: no evaluations succeeded");
    out.found = false;
    out.window = Box::centered(below);
    out.lambda_hat = seen.at(below).lambda_hat;
    out.ci = seen.at(below).ci;
    out.upper_window = Box::centered(above);
    out.upper_lambda_hat = seen.at(above).lambda_hat;
    out.upper_ci = seen.at(above).ci;
    return out;
}

TvExperimentResult tv_experiment(const ExperimentSpec& spec) {
    if (spec.replicas <= 0) throw invalid_parameter("tv_experiment: replicas must be positive");
    if (spec.model.N > spec.model.L_max)
        throw invalid_parameter(
            "tv_experiment: violated precondition N <= L_max (N = " +
            std::to_string(spec.model.N) + ", L_max = " + std::to_string(spec.model.L_max) +
            "); the realized index set would be empty");
    ResolvedModel rm = resolve_model(spec.model);
    CountsOut counts = run_counts(spec, rm);

    TvExperimentResult out;
    out.replicas = spec.replicas;
    out.lambda_hat = counts.mean;
    out.lambda_ci = normal_ci(counts.mean, counts.sd, spec.replicas);
    out.lambda_reference = spec.analytic_reference ? analytic_lambda_midpoint(rm) : counts.mean;
    if (out.lambda_reference <= 0)
        throw invalid_parameter("tv_experiment: Poisson reference mean is zero "
                                "(no contours of length >= N intersect the window)");

    Rng boot_rng(derive_seed(spec.seed, 0xB007));
    out.tv = tv_with_bootstrap_ci(counts.hist, spec.replicas, out.lambda_reference,
                                  spec.bootstrap_rounds, boot_rng);
    out.half_lambda[0] = counts.half_mean[0];
    out.half_lambda[1] = counts.half_mean[1];
    out.tv_halves = tv_halves_vs_product(counts.halves, spec.replicas, counts.half_mean[0],
                                         counts.half_mean[1]);

    BoundParams bp = rm.bounds;
    bp.lambda = std::max(out.lambda_hat, 1e-300);
    out.bounds = tv_bound(bp);
    double bound_upper = out.bounds.tv_closed.hi;
    out.pass_by_vacuity = bound_upper >= 1.0;
    out.pass = (out.tv.ci.lo <= bound_upper);
    out.hist = std::move(counts.hist);
    out.per_replica = std::move(counts.per_replica);
    return out;
}

LemmaReport validate_lemmas(const ExperimentSpec& spec) {
    LemmaReport report;
    auto add = [&](LemmaCheck c) {
        report.all_pass = report.all_pass && c.pass;
        report.checks.push_back(std::move(c));
    };

    ModelParams m = spec.model;
    if (!m.window) m.window = Box::centered(8);
    ResolvedModel rm = resolve_model(m);

    // Presence probabilities against the two-sided analytic bounds
    // (CI-overlap counts as inside).
    BoundParams lemma_bp = rm.bounds;
    lemma_bp.N = 4;  // the presence lemma applies from length 4 on
    for (int len : {4, 6, 8}) {
        if (len > m.L_max) continue;
        const Shape* probe = nullptr;
        for (const Shape& s : rm.family->shapes().shapes)
            if (s.length == len) {
                probe = &s;
                break;
            }
        if (!probe) continue;
        Contour gamma = probe->contour;  // normalized: near the origin, inside the window
        PresenceEstimate pe = estimate_p_gamma(gamma, rm.family, spec.process, spec.replicas,
                                               derive_seed(spec.seed, 0x9A, uint64_t(len)),
                                               spec.threads);
        Interval bound = p_gamma_bounds(len, lemma_bp);
        LemmaCheck c;
        c.name = "presence-bounds-len" + std::to_string(len);
        c.lhs = pe.estimate;
        c.rhs = bound.hi;
        c.pass = pe.ci.lo <= bound.hi && pe.ci.hi >= bound.lo;
        c.note = "ci [" + std::to_string(pe.ci.lo) + ", " + std::to_string(pe.ci.hi) +
                 "] vs bound [" + std::to_string(bound.lo) + ", " + std::to_string(bound.hi) + "]";
        add(std::move(c));
    }

    // Pair-probability bound, exact on a three-square family.
    {
        std::vector<Contour> sq;
        for (int x : {0, 2, 4}) sq.push_back(Contour::boundary_of_cells({Pt{x, 0}}));
        ContourFamily fam3 = ContourFamily::hand_built(sq);
        GibbsDistribution g = exact_gibbs_small(fam3, m.beta);
        double bound = pair_bound(4, 4, std::exp(-4.0 * m.beta), std::exp(-4.0 * m.beta),
                                  lemma_bp);
        LemmaCheck c;
        c.name = "pair-bound-exact";
        c.lhs = g.pair_marginals[0][1];
        c.rhs = bound;
        c.pass = c.lhs <= c.rhs;
        add(std::move(c));
    }

    // Pair-probability bound, empirical: two unit squares two sites apart.
    {
        Contour g1 = Contour::boundary_of_cells({Pt{0, 0}});
        Contour g2 = Contour::boundary_of_cells({Pt{2, 0}});
        ClanSampler sampler(rm.family, RootQuery::basis_set({g1, g2}), spec.process);
        uint64_t k1 = rm.family->resolve(g1).key, k2 = rm.family->resolve(g2).key;
        Rng rng(derive_seed(spec.seed, 0x9B));
        int64_t both = 0;
        for (int64_t r = 0; r < spec.replicas; ++r) {
            bool h1 = false, h2 = false;
            for (const BasisRef& b : sampler.sample_eta_zero(rng)) {
                h1 = h1 || b.key == k1;
                h2 = h2 || b.key == k2;
            }
            if (h1 && h2) both++;
        }
        Ci ci = wilson_ci(both, spec.replicas);
        double bound = pair_bound(4, 4, std::exp(-4.0 * m.beta), std::exp(-4.0 * m.beta),
                                  lemma_bp);
        LemmaCheck c;
        c.name = "pair-bound-empirical";
        c.lhs = double(both) / double(spec.replicas);
        c.rhs = bound;
        c.pass = ci.lo <= bound;
        add(std::move(c));
    }

    // Clan-coupling incompatibility flag frequency against the analytic
    // coupling bound (evaluated with the certified lower alpha0(beta'), the
    // strictest valid version of the bound).
    {
        int sep = 6;
        Box a{-sep - 1, 0, -sep, 1};
        Box b{0, 0, 1, 1};
        Box hull{a.xmin, a.ymin, b.xmax, b.ymax};
        ModelParams cm = m;
        cm.window = hull;
        cm.sim_box.reset();
        ResolvedModel crm = resolve_model(cm);
        CoupledSampler cs(crm.family, a, b, spec.process);
        int64_t flags = 0;
        for (int64_t r = 0; r < spec.replicas; ++r)
            if (cs.run(derive_seed(spec.seed, 0x9C, uint64_t(r))).incompatible) flags++;

        double rp_lo = alpha0_lower(m.beta_prime, m.L_max, m.anchor);
        double com = 0;
        for (int32_t xa = a.xmin; xa <= a.xmax; ++xa)
            for (int32_t ya = a.ymin; ya <= a.ymax; ++ya)
                for (int32_t xb = b.xmin; xb <= b.xmax; ++xb)
                    for (int32_t yb = b.ymin; yb <= b.ymax; ++yb) {
                        double dist = std::hypot(double(xa - xb), double(ya - yb));
                        com += dist * std::exp(-(m.beta - m.beta_prime) * dist);
                    }
        com *= 2.0 / ((1.0 - rp_lo) * (1.0 - rp_lo));
        LemmaCheck c;
        c.name = "coupling-flag-bound";
        c.lhs = double(flags) / double(spec.replicas);
        c.rhs = com;
        c.pass = c.lhs <= com;
        c.note = "separation " + std::to_string(sep);
        add(std::move(c));
    }

    // Assembled b1 from estimated presence probabilities vs the closed form.
    {
        int lmax_small = std::min(m.L_max, 8);
        Box w = Box::centered(6);
        ContourFamily fam = enumerate_window(w, lmax_small);
        auto exp_fam = std::make_shared<ExplicitFamily>(fam, m.beta);
        ClanSampler sampler(exp_fam, RootQuery::all(), spec.process);
        Rng rng(derive_seed(spec.seed, 0x9D));
        std::vector<int64_t> hits(fam.size(), 0);
        int64_t reps = std::min<int64_t>(spec.replicas, 20000);
        for (int64_t r = 0; r < reps; ++r)
            for (const BasisRef& b : sampler.sample_eta_zero(rng)) hits[b.shape]++;

        double emp_b1 = 0;
        for (size_t i = 0; i < fam.size(); ++i) {
            if (fam.members[i].length() < 4) continue;
            double pi = double(hits[i]) / double(reps);
            for (size_t j = 0; j < fam.size(); ++j) {
                if (contour_distance(fam.members[i], fam.members[j], m.norm) >= rm.D_value)
                    continue;
                emp_b1 += pi * double(hits[j]) / double(reps);
            }
        }
        Interval analytic = b1_bound(lemma_bp);
        LemmaCheck c;
        c.name = "b1-empirical-vs-analytic";
        c.lhs = emp_b1;
        c.rhs = analytic.hi;
        c.pass = emp_b1 <= analytic.hi;
        add(std::move(c));
    }

    return report;
}

}  // namespace cgas
