#include "doctest.h"

#include "cgas/enumerate.hpp"
#include "cgas/errors.hpp"

#include "oracle_enumerate.hpp"

using namespace cgas;

TEST_CASE("anchored enumeration rejects bad L_max") {
    CHECK_THROWS_AS(enumerate_anchored(default_anchor_link(), 3), invalid_parameter);
    CHECK_THROWS_AS(enumerate_anchored(default_anchor_link(), 7), invalid_parameter);
    CHECK_THROWS_AS(enumerate_anchored(default_anchor_link(), 2), invalid_parameter);
}

TEST_CASE("anchored enumeration small counts") {
    // L_max = 4: exactly the two unit squares containing the anchor link.
    ContourFamily f4 = enumerate_anchored(default_anchor_link(), 4);
    CHECK(f4.size() == 2);
    f4.validate();
    for (const Contour& c : f4.members) {
        CHECK(c.length() == 4);
        CHECK(c.contains_link(default_anchor_link()));
    }

    // L_max = 6 adds the six domino boundaries through the anchor.
    ContourFamily f6 = enumerate_anchored(default_anchor_link(), 6);
    CHECK(f6.size() == 8);
    f6.validate();
}

TEST_CASE("anchored enumeration equals the link-subset oracle") {
    for (int L : {4, 6, 8}) {
        ContourFamily fam = enumerate_anchored(default_anchor_link(), L);
        auto oracle = oracle::anchored_contours(default_anchor_link(), L);
        REQUIRE(fam.size() == oracle.size());
        CHECK(fam.members == oracle);
    }
}

TEST_CASE("anchored counts by length") {
    const auto& counts = anchored_length_counts(AnchorSpec::Mode::fixed_link, 10);
    CHECK(counts[4] == 2);
    CHECK(counts[6] == 6);
    CHECK(counts[8] == 36);
    CHECK(counts[10] == 180);
    for (int n = 0; n <= 10; ++n)
        if (n % 2 == 1) CHECK(counts[n] == 0);
}

TEST_CASE("anchor position does not change counts") {
    ContourFamily a = enumerate_anchored(default_anchor_link(), 8);
    ContourFamily b = enumerate_anchored(link_between(Pt{5, -3}, 0), 8);
    CHECK(a.size() == b.size());
}

TEST_CASE("surrounds-origin anchoring") {
    AnchorSpec s;
    s.mode = AnchorSpec::Mode::surrounds_origin;
    ContourFamily f = enumerate_anchored(s, 4);
    // only the unit square around the origin encloses it at length 4
    CHECK(f.size() == 1);
    ContourFamily f6 = enumerate_anchored(s, 6);
    // plus the four dominoes containing the origin cell
    CHECK(f6.size() == 5);
}

TEST_CASE("shape table classes") {
    const ShapeTable& t = ShapeTable::cached(10);
    int64_t by_len[11] = {0};
    for (const Shape& s : t.shapes) by_len[s.length]++;
    CHECK(by_len[4] == 1);
    CHECK(by_len[6] == 2);
    CHECK(by_len[8] == 9);
    CHECK(by_len[10] == 36);
    // class count times length equals twice the anchored count
    const auto& counts = anchored_length_counts(AnchorSpec::Mode::fixed_link, 10);
    for (int n = 4; n <= 10; n += 2) CHECK(by_len[n] * n == 2 * counts[n]);
}

TEST_CASE("window enumeration") {
    Box w{0, 0, 0, 0};  // single site
    ContourFamily fam = enumerate_window(w, 4);
    fam.validate();
    // unit squares touching one site: the cell itself and its four neighbors
    CHECK(fam.size() == 5);

    auto oracle = oracle::window_contours(w, 4);
    CHECK(fam.members == oracle);
}

TEST_CASE("window enumeration equals oracle on a 2x2 window") {
    Box w{0, 0, 1, 1};
    for (int L : {4, 6}) {
        ContourFamily fam = enumerate_window(w, L);
        auto oracle = oracle::window_contours(w, L);
        REQUIRE(fam.size() == oracle.size());
        CHECK(fam.members == oracle);
    }
}

TEST_CASE("window enumeration translation covariance") {
    Box w{0, 0, 1, 1};
    Box w2{7, -4, 8, -3};
    ContourFamily a = enumerate_window(w, 6);
    ContourFamily b = enumerate_window(w2, 6);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i)
        CHECK(a.members[i].translated({7, -4}) == b.members[i]);
}

TEST_CASE("window family filtered by N > L_max is empty") {
    ContourFamily fam = enumerate_window(Box{0, 0, 1, 1}, 6);
    int count = 0;
    for (const Contour& c : fam.members)
        if (c.length() >= 8) count++;
    CHECK(count == 0);
}
