// Command-line front end: enumeration, certified constants, analytic bound
// reports, perfect sampling, estimators, the end-to-end tv-check pipeline,
// and parameter sweeps. Human-readable progress goes to stderr; machine
// output goes to files under --out. Exit codes: 0 success, 1 verdict FAIL,
// 2 parameter error, 3 budget/percolation error.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "cgas/errors.hpp"
#include "cgas/report.hpp"

namespace fs = std::filesystem;
using namespace cgas;

namespace {

struct RunConfig {
    std::string command;
    std::string config_path;

    double beta = 2.0;
    double beta_prime = 1.8;
    int N = 8;
    std::optional<double> D;
    double lambda = 1.0;
    int L_max = 16;
    std::optional<int> box;     // simulation box side
    std::optional<int> window;  // window side
    std::string anchor = "link";
    std::string norm = "euclid";

    uint64_t seed = 1;
    int64_t replicas = 10000;
    int threads = 0;
    double tolerance = 0.05;
    bool analytic_reference = false;
    std::string dump_clans;

    std::string out = "out";
    std::string format = "json";
    bool force = false;

    Json grid;  // sweep only

    Json echo() const {
        Json j;
        j["command"] = command;
        j["beta"] = beta;
        j["beta-prime"] = beta_prime;
        j["N"] = N;
        if (D) j["D"] = *D;
        j["lambda"] = lambda;
        j["L-max"] = L_max;
        if (box) j["box"] = *box;
        if (window) j["window"] = *window;
        j["anchor"] = anchor;
        j["norm"] = norm;
        j["seed"] = seed;
        j["replicas"] = replicas;
        j["threads"] = threads;
        j["tolerance"] = tolerance;
        j["analytic-reference"] = analytic_reference;
        j["out"] = out;
        j["format"] = format;
        j["force"] = force;
        if (!grid.is_null()) j["grid"] = grid;
        return j;
    }
};

void apply_config_file(RunConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw invalid_parameter("cannot open config file: " + path);
    Json j = Json::parse(in);
    if (j.contains("command")) c.command = j["command"].get<std::string>();
    if (j.contains("beta")) c.beta = j["beta"].get<double>();
    if (j.contains("beta-prime")) c.beta_prime = j["beta-prime"].get<double>();
    if (j.contains("N")) c.N = j["N"].get<int>();
    if (j.contains("D")) c.D = j["D"].get<double>();
    if (j.contains("lambda")) c.lambda = j["lambda"].get<double>();
    if (j.contains("L-max")) c.L_max = j["L-max"].get<int>();
    if (j.contains("box")) c.box = j["box"].get<int>();
    if (j.contains("window")) c.window = j["window"].get<int>();
    if (j.contains("anchor")) c.anchor = j["anchor"].get<std::string>();
    if (j.contains("norm")) c.norm = j["norm"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
    if (j.contains("replicas")) c.replicas = j["replicas"].get<int64_t>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("tolerance")) c.tolerance = j["tolerance"].get<double>();
    if (j.contains("analytic-reference"))
        c.analytic_reference = j["analytic-reference"].get<bool>();
    if (j.contains("dump-clans")) c.dump_clans = j["dump-clans"].get<std::string>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("format")) c.format = j["format"].get<std::string>();
    if (j.contains("force")) c.force = j["force"].get<bool>();
    if (j.contains("grid")) c.grid = j["grid"];
}

AnchorSpec anchor_of(const RunConfig& c) {
    AnchorSpec a;
    if (c.anchor == "link")
        a.mode = AnchorSpec::Mode::fixed_link;
    else if (c.anchor == "origin")
        a.mode = AnchorSpec::Mode::surrounds_origin;
    else
        throw invalid_parameter("anchor must be 'link' or 'origin', got " + c.anchor);
    return a;
}

ModelParams model_of(const RunConfig& c) {
    ModelParams m;
    m.beta = c.beta;
    m.beta_prime = c.beta_prime;
    m.N = c.N;
    m.D = c.D;
    m.lambda_target = c.lambda;
    m.L_max = c.L_max;
    if (c.window) m.window = Box::centered(*c.window);
    if (c.box) m.sim_box = Box::centered(*c.box);
    m.anchor = anchor_of(c);
    if (c.norm == "euclid")
        m.norm = Norm::euclid;
    else if (c.norm == "sup")
        m.norm = Norm::sup;
    else
        throw invalid_parameter("norm must be 'euclid' or 'sup', got " + c.norm);
    return m;
}

ExperimentSpec spec_of(const RunConfig& c) {
    ExperimentSpec s;
    s.model = model_of(c);
    s.replicas = c.replicas;
    s.seed = c.seed;
    s.threads = c.threads;
    s.analytic_reference = c.analytic_reference;
    return s;
}

// Reports are never overwritten silently: without --force a timestamp is
// appended to the file name (content itself stays deterministic).
fs::path output_path(const RunConfig& c, const std::string& name) {
    fs::create_directories(c.out);
    fs::path p = fs::path(c.out) / name;
    if (fs::exists(p) && !c.force) {
        auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", std::localtime(&now));
        fs::path alt = p;
        alt.replace_filename(p.stem().string() + "-" + stamp + p.extension().string());
        std::cerr << "note: " << p.string() << " exists, writing " << alt.string() << "\n";
        return alt;
    }
    return p;
}

void write_json(const RunConfig& c, const std::string& name, Json body) {
    body["config"] = c.echo();
    fs::path p = output_path(c, name);
    std::ofstream out(p);
    out << body.dump(2) << "\n";
    std::cerr << "wrote " << p.string() << "\n";
}

void write_text(const RunConfig& c, const std::string& name, const std::string& text) {
    fs::path p = output_path(c, name);
    std::ofstream out(p);
    out << text;
    std::cerr << "wrote " << p.string() << "\n";
}

int cmd_enumerate(const RunConfig& c) {
    ContourFamily fam = c.window ? enumerate_window(Box::centered(*c.window), c.L_max)
                                 : enumerate_anchored(anchor_of(c), c.L_max);
    std::vector<int64_t> by_len(c.L_max + 1, 0);
    for (const Contour& g : fam.members) by_len[g.length()]++;
    Json j;
    j["total"] = fam.members.size();
    Json lens;
    for (int n = 4; n <= c.L_max; n += 2) lens[std::to_string(n)] = by_len[n];
    j["count_by_length"] = lens;
    write_json(c, "enumerate.json", j);

    std::ostringstream os;
    write_family(fam, os);
    write_text(c, "contours.txt", os.str());
    return 0;
}

int cmd_alpha0(const RunConfig& c) {
    Alpha0Bounds a = alpha0_bounds(c.beta, c.L_max, anchor_of(c));
    write_json(c, "alpha0.json", to_json(a));
    return 0;
}

int cmd_beta_star(const RunConfig& c) {
    BetaStarBracket b = beta_star_bracket(c.tolerance, c.L_max, anchor_of(c));
    write_json(c, "beta_star.json", to_json(b));
    if (!b.meets_tolerance)
        std::cerr << "note: truncation gap exceeds the tolerance; bracket reported as-is\n";
    return 0;
}

BoundReport bounds_report_of(const RunConfig& c) {
    BoundParams p =
        BoundParams::from_model(c.beta, c.beta_prime, c.N, c.lambda, c.L_max, anchor_of(c));
    if (c.D) p.D = *c.D;
    return tv_bound(p);
}

int cmd_bounds(const RunConfig& c) {
    BoundReport r = bounds_report_of(c);
    if (c.format == "csv")
        write_text(c, "bounds.csv",
                   bound_report_csv_header() + "\n" + bound_report_csv_row(r) + "\n");
    else
        write_json(c, "bounds.json", to_json(r));
    if (!r.epsilon_strict_ok)
        std::cerr << "warning: epsilon satisfies only the lemma-header admissibility "
                     "condition (eps*d >= beta - beta')\n";
    return 0;
}

int cmd_sample(const RunConfig& c) {
    ExperimentSpec spec = spec_of(c);
    if (!spec.model.window) spec.model.window = Box::centered(8);
    ResolvedModel rm = resolve_model(spec.model);
    ClanSampler sampler(rm.family, RootQuery::window(rm.window), spec.process);

    Json samples = Json::array();
    std::unordered_map<std::string, int64_t> freq;
    int64_t kept_total = 0;
    for (int64_t r = 0; r < spec.replicas; ++r) {
        Rng rng(derive_seed(spec.seed, 0x5A3, uint64_t(r)));
        auto eta = sampler.sample_eta_zero(rng);
        kept_total += int64_t(eta.size());
        Json lines = Json::array();
        for (const BasisRef& b : eta) {
            std::string line = rm.family->materialize(b).to_line();
            freq[line]++;
            lines.push_back(line);
        }
        if (r < 100) samples.push_back(lines);
    }
    if (!c.dump_clans.empty()) {
        Rng rng0(derive_seed(spec.seed, 0x5A3, uint64_t(0)));
        Clan clan = sampler.grow_clan(rng0);
        std::ofstream os(c.dump_clans);
        dump_clan_jsonl(clan, *rm.family, os);
        std::cerr << "wrote clan dump " << c.dump_clans << "\n";
    }
    Json j;
    j["replicas"] = spec.replicas;
    j["mean_present"] = double(kept_total) / double(spec.replicas);
    std::vector<std::pair<std::string, int64_t>> top(freq.begin(), freq.end());
    std::sort(top.begin(), top.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    Json tj = Json::array();
    for (size_t i = 0; i < std::min<size_t>(top.size(), 20); ++i)
        tj.push_back(Json{{"contour", top[i].first},
                          {"frequency", double(top[i].second) / double(spec.replicas)}});
    j["top_contours"] = tj;
    j["first_samples"] = samples;
    write_json(c, "sample.json", j);
    return 0;
}

int cmd_estimate(const RunConfig& c) {
    ExperimentSpec spec = spec_of(c);
    if (spec.model.window) {
        LambdaEstimate le = estimate_lambda(spec);
        write_json(c, "estimate.json", to_json(le));
    } else {
        std::cerr << "no --window given: sizing a window for lambda target " << c.lambda
                  << "\n";
        WindowSizing ws = size_window_for_lambda(spec);
        write_json(c, "estimate.json", to_json(ws));
    }
    return 0;
}

int cmd_tv_check(const RunConfig& c) {
    ExperimentSpec spec = spec_of(c);
    if (!spec.model.window) {
        std::cerr << "sizing window for lambda target " << c.lambda << "\n";
        ExperimentSpec sizing = spec;
        sizing.replicas = std::max<int64_t>(2000, spec.replicas / 10);
        WindowSizing ws = size_window_for_lambda(sizing);
        spec.model.window = ws.window;
        std::cerr << "window side " << ws.window.width() << " with lambda_hat "
                  << ws.lambda_hat << "\n";
    }
    TvExperimentResult r = tv_experiment(spec);
    Json j = to_json(r);
    j["window"] = to_json(*spec.model.window);
    write_json(c, "tv_check.json", j);

    std::ostringstream pr;
    write_per_replica_csv(r.per_replica, pr);
    write_text(c, "per_replica.csv", pr.str());
    std::ostringstream hs;
    write_histogram_csv(r.hist, r.replicas, r.lambda_reference, hs);
    write_text(c, "histogram.csv", hs.str());

    std::cerr << "empirical TV " << r.tv.tv << "  analytic bound " << r.bounds.tv_closed.hi
              << "  verdict "
              << (r.pass ? (r.pass_by_vacuity ? "PASS (vacuous)" : "PASS") : "FAIL") << "\n";
    return r.pass ? 0 : 1;
}

int cmd_validate(const RunConfig& c) {
    ExperimentSpec spec = spec_of(c);
    LemmaReport rep = validate_lemmas(spec);
    write_json(c, "validate.json", to_json(rep));
    for (const LemmaCheck& ck : rep.checks)
        std::cerr << (ck.pass ? "PASS " : "FAIL ") << ck.name << " (lhs " << ck.lhs
                  << " vs bound " << ck.rhs << ")\n";
    return rep.all_pass ? 0 : 1;
}

int cmd_sweep(const RunConfig& c) {
    if (c.grid.is_null() || !c.grid.is_object() || c.grid.empty())
        throw invalid_parameter("sweep requires a nonempty 'grid' object in the config file");
    bool simulate = false;
    std::vector<std::pair<std::string, std::vector<Json>>> axes;
    for (auto& [key, values] : c.grid.items()) {
        if (key == "simulate") {
            simulate = values.get<bool>();
            continue;
        }
        if (!values.is_array() || values.empty())
            throw invalid_parameter("sweep grid entry '" + key + "' must be a nonempty array");
        axes.push_back({key, std::vector<Json>(values.begin(), values.end())});
    }
    if (axes.empty()) throw invalid_parameter("sweep grid has no parameter axes");

    std::vector<size_t> idx(axes.size(), 0);
    std::ostringstream csv;
    csv << "status," << bound_report_csv_header();
    if (simulate) csv << ",empirical_tv,tv_ci_lo,tv_ci_hi,lambda_hat";
    csv << "\n";
    int64_t points = 0;
    bool more = true;
    while (more) {
        RunConfig pc = c;
        for (size_t a = 0; a < axes.size(); ++a) {
            const std::string& key = axes[a].first;
            const Json& v = axes[a].second[idx[a]];
            if (key == "beta")
                pc.beta = v.get<double>();
            else if (key == "beta-prime")
                pc.beta_prime = v.get<double>();
            else if (key == "N")
                pc.N = v.get<int>();
            else if (key == "lambda")
                pc.lambda = v.get<double>();
            else if (key == "L-max")
                pc.L_max = v.get<int>();
            else if (key == "D")
                pc.D = v.get<double>();
            else if (key == "window")
                pc.window = v.get<int>();
            else if (key == "replicas")
                pc.replicas = v.get<int64_t>();
            else
                throw invalid_parameter("sweep grid key not sweepable: " + key);
        }
        try {
            BoundReport r = bounds_report_of(pc);
            csv << "ok," << bound_report_csv_row(r);
            if (simulate) {
                TvExperimentResult tv = tv_experiment(spec_of(pc));
                csv << "," << tv.tv.tv << "," << tv.tv.ci.lo << "," << tv.tv.ci.hi << ","
                    << tv.lambda_hat;
            }
            csv << "\n";
        } catch (const std::exception& e) {
            csv << "error: " << e.what() << "\n";
        }
        points++;
        more = false;
        for (size_t a = axes.size(); a-- > 0;) {
            if (++idx[a] < axes[a].second.size()) {
                more = true;
                break;
            }
            idx[a] = 0;
        }
    }
    std::cerr << "swept " << points << " grid points\n";
    write_text(c, "sweep.csv", csv.str());
    return 0;
}

int run(RunConfig& c) {
    if (c.command == "enumerate") return cmd_enumerate(c);
    if (c.command == "alpha0") return cmd_alpha0(c);
    if (c.command == "beta-star") return cmd_beta_star(c);
    if (c.command == "bounds") return cmd_bounds(c);
    if (c.command == "sample") return cmd_sample(c);
    if (c.command == "estimate") return cmd_estimate(c);
    if (c.command == "tv-check") return cmd_tv_check(c);
    if (c.command == "validate") return cmd_validate(c);
    if (c.command == "sweep") return cmd_sweep(c);
    throw invalid_parameter("unknown command: " + c.command);
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"contour-gas perfect simulation and Poisson-approximation bounds"};
    app.add_option("command", cfg.command,
                   "one of: enumerate alpha0 beta-star bounds sample estimate tv-check "
                   "validate sweep");
    app.add_option("--config", cfg.config_path, "flat JSON config; flags override its keys");
    auto* o_seed = app.add_option("--seed", cfg.seed);
    auto* o_beta = app.add_option("--beta", cfg.beta);
    auto* o_bp = app.add_option("--beta-prime", cfg.beta_prime);
    auto* o_N = app.add_option("--N", cfg.N);
    double dval = 0;
    auto* o_D = app.add_option("--D", dval);
    auto* o_lam = app.add_option("--lambda", cfg.lambda);
    auto* o_lmax = app.add_option("--L-max", cfg.L_max);
    int box_side = 0, window_side = 0;
    auto* o_box = app.add_option("--box", box_side, "simulation box side");
    auto* o_win = app.add_option("--window", window_side, "window side");
    auto* o_rep = app.add_option("--replicas", cfg.replicas);
    auto* o_out = app.add_option("--out", cfg.out);
    auto* o_fmt =
        app.add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));
    auto* o_force = app.add_flag("--force", cfg.force, "overwrite existing reports");
    auto* o_anchor =
        app.add_option("--anchor", cfg.anchor)->check(CLI::IsMember({"link", "origin"}));
    auto* o_norm = app.add_option("--norm", cfg.norm)->check(CLI::IsMember({"euclid", "sup"}));
    auto* o_tol = app.add_option("--tolerance", cfg.tolerance);
    auto* o_thr = app.add_option("--threads", cfg.threads);
    auto* o_ref = app.add_flag("--analytic-reference", cfg.analytic_reference);
    auto* o_dump = app.add_option("--dump-clans", cfg.dump_clans, "clan JSONL path (sample)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!cfg.config_path.empty()) {
            // config file first, then explicit flags override
            RunConfig flags = cfg;
            apply_config_file(cfg, cfg.config_path);
            if (!flags.command.empty()) cfg.command = flags.command;
            if (o_seed->count()) cfg.seed = flags.seed;
            if (o_beta->count()) cfg.beta = flags.beta;
            if (o_bp->count()) cfg.beta_prime = flags.beta_prime;
            if (o_N->count()) cfg.N = flags.N;
            if (o_lam->count()) cfg.lambda = flags.lambda;
            if (o_lmax->count()) cfg.L_max = flags.L_max;
            if (o_rep->count()) cfg.replicas = flags.replicas;
            if (o_out->count()) cfg.out = flags.out;
            if (o_fmt->count()) cfg.format = flags.format;
            if (o_force->count()) cfg.force = flags.force;
            if (o_anchor->count()) cfg.anchor = flags.anchor;
            if (o_norm->count()) cfg.norm = flags.norm;
            if (o_tol->count()) cfg.tolerance = flags.tolerance;
            if (o_thr->count()) cfg.threads = flags.threads;
            if (o_ref->count()) cfg.analytic_reference = flags.analytic_reference;
            if (o_dump->count()) cfg.dump_clans = flags.dump_clans;
        }
        if (o_D->count()) cfg.D = dval;
        if (o_box->count()) cfg.box = box_side;
        if (o_win->count()) cfg.window = window_side;
        if (cfg.command.empty()) throw invalid_parameter("no command given (see --help)");
        return run(cfg);
    } catch (const budget_exceeded& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const invalid_parameter& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
