#include "cgas/report.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "cgas/errors.hpp"

namespace cgas {

Json to_json(const Box& b) { return Json{{"xmin", b.xmin}, {"ymin", b.ymin}, {"xmax", b.xmax}, {"ymax", b.ymax}}; }
Json to_json(const Interval& i) { return Json{{"lo", i.lo}, {"hi", i.hi}}; }
Json to_json(const Ci& c) { return Json{{"lo", c.lo}, {"hi", c.hi}}; }

Box box_from_json(const Json& j) {
    Box b;
    b.xmin = j.at("xmin").get<int32_t>();
    b.ymin = j.at("ymin").get<int32_t>();
    b.xmax = j.at("xmax").get<int32_t>();
    b.ymax = j.at("ymax").get<int32_t>();
    return b;
}

Json to_json(const Alpha0Bounds& a) {
    return Json{{"beta", a.beta}, {"L_max", a.L_max}, {"lower", a.lower},
                {"upper", a.upper}, {"tail", a.tail}};
}

Json to_json(const BetaStarBracket& b) {
    return Json{{"lo", b.lo},       {"hi", b.hi},           {"tolerance", b.tolerance},
                {"L_max", b.L_max}, {"meets_tolerance", b.meets_tolerance}};
}

Json to_json(const BoundReport& r) {
    Json j;
    j["d"] = r.d;
    j["beta"] = r.beta;
    j["beta_prime"] = r.beta_prime;
    j["N"] = r.N;
    j["lambda"] = r.lambda;
    j["beta_star"] = Json{{"lo", r.beta_star_lo}, {"hi", r.beta_star_hi}};
    j["rho"] = to_json(r.rho);
    j["rho_prime"] = to_json(r.rho_prime);
    j["K"] = to_json(r.K);
    j["delta"] = to_json(r.delta);
    j["Q"] = to_json(r.Q);
    j["A"] = to_json(r.A);
    j["M"] = to_json(r.M);
    j["epsilon_used"] = r.epsilon_used;
    j["D_used"] = r.D_used;
    j["epsilon_strict_ok"] = r.epsilon_strict_ok;
    j["b1"] = to_json(r.b1);
    j["b2"] = to_json(r.b2);
    j["b3_general"] = to_json(r.b3_general);
    if (r.b3_simplified) j["b3_simplified"] = to_json(*r.b3_simplified);
    j["assembled"] = to_json(r.assembled);
    j["tv_closed"] = to_json(r.tv_closed);
    j["closed_dominates_assembled"] = r.closed_dominates_assembled;
    return j;
}

Json to_json(const PresenceEstimate& p) {
    return Json{{"estimate", p.estimate}, {"ci", to_json(p.ci)},
                {"hits", p.hits},         {"replicas", p.replicas}};
}

Json to_json(const LambdaEstimate& l) {
    Json j{{"lambda_hat", l.lambda_hat}, {"ci", to_json(l.ci)}, {"replicas", l.replicas}};
    j["hist"] = l.hist;
    return j;
}

Json to_json(const WindowSizing& w) {
    Json j;
    j["found"] = w.found;
    j["window"] = to_json(w.window);
    j["lambda_hat"] = w.lambda_hat;
    j["ci"] = to_json(w.ci);
    if (w.upper_window) {
        j["upper_window"] = to_json(*w.upper_window);
        j["upper_lambda_hat"] = w.upper_lambda_hat;
        j["upper_ci"] = to_json(w.upper_ci);
    }
    Json trace = Json::array();
    for (const auto& t : w.trace)
        trace.push_back(Json{{"side", t.side}, {"lambda_hat", t.lambda_hat}, {"ci", to_json(t.ci)}});
    j["trace"] = trace;
    return j;
}

Json to_json(const TvExperimentResult& r) {
    Json j;
    j["replicas"] = r.replicas;
    j["lambda_hat"] = r.lambda_hat;
    j["lambda_ci"] = to_json(r.lambda_ci);
    j["lambda_reference"] = r.lambda_reference;
    j["tv_total_count"] = r.tv.tv;
    j["tv_ci"] = to_json(r.tv.ci);
    j["tv_halves"] = r.tv_halves;
    j["half_lambda"] = Json::array({r.half_lambda[0], r.half_lambda[1]});
    j["bounds"] = to_json(r.bounds);
    j["analytic_bound_upper"] = r.bounds.tv_closed.hi;
    j["pass"] = r.pass;
    j["pass_by_vacuity"] = r.pass_by_vacuity;
    j["verdict"] = r.pass ? (r.pass_by_vacuity ? "PASS (vacuous bound)" : "PASS") : "FAIL";
    j["hist"] = r.hist;
    return j;
}

Json to_json(const LemmaReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back(Json{{"name", c.name},
                              {"pass", c.pass},
                              {"lhs", c.lhs},
                              {"rhs", c.rhs},
                              {"note", c.note}});
    return Json{{"all_pass", r.all_pass}, {"checks", checks}};
}

void write_family(const ContourFamily& fam, std::ostream& os) {
    std::vector<std::string> lines;
    lines.reserve(fam.members.size());
    for (const Contour& c : fam.members) lines.push_back(c.to_line());
    std::sort(lines.begin(), lines.end());
    for (const std::string& l : lines) os << l << "\n";
}

ContourFamily read_family(std::istream& is) {
    std::vector<Contour> members;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        members.push_back(Contour::parse_line(line));
    }
    return ContourFamily::hand_built(std::move(members));
}

std::string bound_report_csv_header() {
    return "d,beta,beta_prime,N,lambda,beta_star_lo,beta_star_hi,rho_lo,rho_hi,"
           "rho_prime_lo,rho_prime_hi,K_lo,K_hi,delta_lo,delta_hi,Q_lo,Q_hi,A_lo,A_hi,"
           "M_lo,M_hi,epsilon_used,D_used,epsilon_strict_ok,b1_lo,b1_hi,b2_lo,b2_hi,"
           "b3_lo,b3_hi,assembled_lo,assembled_hi,tv_closed_lo,tv_closed_hi,"
           "closed_dominates_assembled";
}

std::string bound_report_csv_row(const BoundReport& r) {
    std::ostringstream os;
    os.precision(17);
    auto iv = [&](const Interval& i) { os << "," << i.lo << "," << i.hi; };
    os << r.d << "," << r.beta << "," << r.beta_prime << "," << r.N << "," << r.lambda << ","
       << r.beta_star_lo << "," << r.beta_star_hi;
    iv(r.rho);
    iv(r.rho_prime);
    iv(r.K);
    iv(r.delta);
    iv(r.Q);
    iv(r.A);
    iv(r.M);
    os << "," << r.epsilon_used << "," << r.D_used << "," << (r.epsilon_strict_ok ? 1 : 0);
    iv(r.b1);
    iv(r.b2);
    iv(r.b3_general);
    iv(r.assembled);
    iv(r.tv_closed);
    os << "," << (r.closed_dominates_assembled ? 1 : 0);
    return os.str();
}

void write_per_replica_csv(const std::vector<int64_t>& totals, std::ostream& os) {
    os << "replica,total\n";
    for (size_t i = 0; i < totals.size(); ++i) os << i << "," << totals[i] << "\n";
}

void write_histogram_csv(const std::vector<int64_t>& hist, int64_t n, double poisson_mean,
                         std::ostream& os) {
    os << "count,empirical_mass,poisson_mass\n";
    os.precision(17);
    for (size_t k = 0; k < hist.size(); ++k)
        os << k << "," << double(hist[k]) / double(n) << "," << poisson_pmf(int64_t(k), poisson_mean)
           << "\n";
}

}  // namespace cgas
