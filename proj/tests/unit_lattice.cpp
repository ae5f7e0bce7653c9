#include "doctest.h"

#include <cmath>
#include <unordered_set>

#include "cgas/contour.hpp"
#include "cgas/enumerate.hpp"
#include "cgas/errors.hpp"
#include "cgas/rng.hpp"

using namespace cgas;

namespace {
Contour unit_square(Pt cell) { return Contour::boundary_of_cells({cell}); }
}

TEST_CASE("link geometry") {
    Link l = link_between(Pt{0, 0}, 1);  // edge between (0,0) and (0,1)
    CHECK(l.mid == Pt{0, 1});
    CHECK(l.axis() == 1);
    CHECK(l.valid());
    auto ends = l.endpoints();
    CHECK(ends[0] == Pt{-1, 1});
    CHECK(ends[1] == Pt{1, 1});
    auto sites = l.crossed_edge_sites();
    CHECK(sites[0] == Pt{0, 0});
    CHECK(sites[1] == Pt{0, 1});

    Link h = link_between(Pt{2, -3}, 0);
    CHECK(h.mid == Pt{5, -6});
    CHECK(h.axis() == 0);
    // exactly one doubled coordinate is odd
    CHECK(((h.mid.x & 1) ^ (h.mid.y & 1)) == 1);
}

TEST_CASE("unit square contour") {
    Contour sq = unit_square({0, 0});
    CHECK(sq.length() == 4);
    CHECK(links_closed(sq.links()));
    CHECK(links_connected(sq.links()));
    CHECK(sq.vertex_set().size() == 4);
    // touched sites: the cell and its four edge neighbors
    CHECK(sq.touched_sites().size() == 5);
}

TEST_CASE("invalid link sets are rejected") {
    Contour sq = unit_square({0, 0});
    std::vector<Link> three(sq.links().begin(), sq.links().begin() + 3);
    CHECK_THROWS_AS(Contour::from_links(three), invariant_violation);

    // two far-apart squares: closed but disconnected
    Contour far = unit_square({10, 0});
    std::vector<Link> both = sq.links();
    both.insert(both.end(), far.links().begin(), far.links().end());
    CHECK(links_closed(both));
    CHECK(!links_connected(both));
    CHECK_THROWS_AS(Contour::from_links(both), invariant_violation);
}

TEST_CASE("figure-eight is a single contour") {
    Contour fig8 = Contour::boundary_of_cells({Pt{0, 0}, Pt{1, 1}});
    CHECK(fig8.length() == 8);
    // the shared dual corner is covered four times
    CHECK(fig8.vertex_set().size() == 7);
}

TEST_CASE("compatibility") {
    Contour a = unit_square({0, 0});
    CHECK(!compatible(a, a));
    CHECK(compatible(a, unit_square({10, 0})));
    // sharing exactly one corner vertex: incompatible
    CHECK(!compatible(a, unit_square({1, 1})));
    // edge-adjacent cells: incompatible
    CHECK(!compatible(a, unit_square({1, 0})));
    // two sites apart: no shared dual vertex
    CHECK(compatible(a, unit_square({2, 0})));
    // symmetry on a small sample
    for (int dx = -2; dx <= 2; ++dx)
        for (int dy = -2; dy <= 2; ++dy) {
            Contour b = unit_square({dx, dy});
            CHECK(compatible(a, b) == compatible(b, a));
        }
}

TEST_CASE("contour distance") {
    Contour a = unit_square({0, 0});
    CHECK(contour_distance(a, a) == 0.0);
    // translate by k: nearest midpoints sit k-1 apart (facing links)
    for (int k : {5, 17}) {
        Contour b = a.translated({int32_t(k), 0});
        CHECK(contour_distance(a, b) == doctest::Approx(double(k) - 1.0));
        CHECK(contour_distance(a, b, Norm::sup) == doctest::Approx(double(k) - 1.0));
    }
    // one lattice step apart: cells (0,0) and (2,0)
    Contour c = unit_square({2, 0});
    CHECK(contour_distance(a, c) == doctest::Approx(1.0));

    // Symmetry, and the triangle inequality in the form valid for min-type
    // set distances: d(x,z) <= d(x,y) + diam(y) + d(y,z).
    auto diam = [](const Contour& g) {
        double best = 0;
        for (const Link& p : g.links())
            for (const Link& q : g.links())
                best = std::max(best, 0.5 * std::hypot(double(p.mid.x - q.mid.x),
                                                       double(p.mid.y - q.mid.y)));
        return best;
    };
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        Contour x = unit_square({int32_t(rng.uniform_int(9)) - 4, int32_t(rng.uniform_int(9)) - 4});
        Contour y = unit_square({int32_t(rng.uniform_int(9)) - 4, int32_t(rng.uniform_int(9)) - 4});
        Contour z = unit_square({int32_t(rng.uniform_int(9)) - 4, int32_t(rng.uniform_int(9)) - 4});
        CHECK(contour_distance(x, y) == doctest::Approx(contour_distance(y, x)));
        CHECK(contour_distance(x, z) <=
              contour_distance(x, y) + diam(y) + contour_distance(y, z) + 1e-12);
    }
}

TEST_CASE("canonical encoding round trip") {
    Contour a = Contour::boundary_of_cells({Pt{0, 0}, Pt{1, 0}, Pt{1, 1}});
    std::string line = a.to_line();
    Contour b = Contour::parse_line(line);
    CHECK(a == b);
    CHECK(b.to_line() == line);

    Contour t = a.translated({-3, 7});
    CHECK(t.normalized() == a.normalized());
    CHECK(!(t == a));
}
