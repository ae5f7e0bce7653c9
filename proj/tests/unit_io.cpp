#include "doctest.h"

#include <sstream>

#include "cgas/report.hpp"

using namespace cgas;

TEST_CASE("family file round trip is sorted and byte-stable") {
    ContourFamily fam = enumerate_window(Box{0, 0, 1, 1}, 6);
    std::ostringstream os;
    write_family(fam, os);
    std::string first = os.str();

    std::istringstream is(first);
    ContourFamily back = read_family(is);
    REQUIRE(back.size() == fam.size());
    CHECK(back.members == fam.members);

    std::ostringstream os2;
    write_family(back, os2);
    CHECK(os2.str() == first);

    // lines are sorted
    std::istringstream lines(first);
    std::string prev, cur;
    bool sorted = true;
    bool have_prev = false;
    while (std::getline(lines, cur)) {
        if (have_prev && !(prev < cur)) sorted = false;
        prev = cur;
        have_prev = true;
    }
    CHECK(sorted);
}

TEST_CASE("bound report csv row matches header arity") {
    BoundParams p;
    p.beta = 2.0;
    p.beta_prime = 1.8;
    p.N = 8;
    p.lambda = 1.0;
    p.rho = Interval::point(0.0008);
    p.rho_prime = Interval::point(0.004);
    p.beta_star.lo = 1.3;
    p.beta_star.hi = 1.37;
    BoundReport r = tv_bound(p);

    std::string header = bound_report_csv_header();
    std::string row = bound_report_csv_row(r);
    auto commas = [](const std::string& s) {
        return std::count(s.begin(), s.end(), ',');
    };
    CHECK(commas(header) == commas(row));

    Json j = to_json(r);
    CHECK(j["beta"] == 2.0);
    CHECK(j["tv_closed"]["hi"].get<double>() >= j["tv_closed"]["lo"].get<double>());
}

TEST_CASE("histogram csv carries both masses") {
    std::vector<int64_t> hist{90, 9, 1};
    std::ostringstream os;
    write_histogram_csv(hist, 100, 0.1, os);
    std::string s = os.str();
    CHECK(s.find("count,empirical_mass,poisson_mass") == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 4);
}

TEST_CASE("per replica csv") {
    std::vector<int64_t> totals{0, 2, 1};
    std::ostringstream os;
    write_per_replica_csv(totals, os);
    CHECK(os.str() == "replica,total\n0,0\n1,2\n2,1\n");
}

TEST_CASE("box json round trip") {
    Box b{-3, 2, 5, 9};
    CHECK(box_from_json(to_json(b)) == b);
}
