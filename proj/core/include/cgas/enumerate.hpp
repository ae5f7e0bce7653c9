#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgas/contour.hpp"
#include "cgas/geometry.hpp"

namespace cgas {

inline Link default_anchor_link() { return link_between(Pt{0, 0}, 1); }

// What "theta contains 0" means for the anchored contour sum. Default: the
// contour contains a fixed dual link (the one crossing the edge between the
// origin and its neighbor along axis 1). Alternative: the contour encloses
// the origin.
struct AnchorSpec {
    enum class Mode { fixed_link, surrounds_origin };
    Mode mode = Mode::fixed_link;
    Link link = default_anchor_link();

    std::string name() const {
        return mode == Mode::fixed_link ? "fixed-link" : "surrounds-origin";
    }
};

struct FamilySpec {
    enum class Kind { anchored, window, hand_built };
    Kind kind = Kind::hand_built;
    int L_max = 0;
    AnchorSpec anchor;
    Box window;
};

// An explicit, finite, duplicate-free set of contours in canonical order.
struct ContourFamily {
    std::vector<Contour> members;  // sorted by canonical encoding
    FamilySpec spec;

    size_t size() const { return members.size(); }
    // Throws invariant_violation on duplicates, non-canonical members, or
    // members longer than spec.L_max (when a generator spec is present).
    void validate() const;

    static ContourFamily hand_built(std::vector<Contour> members);
};

// All contours of length <= L_max containing the anchor (or enclosing the
// origin, per mode). Deterministic sorted output. L_max must be even, >= 4.
ContourFamily enumerate_anchored(const AnchorSpec& anchor, int L_max);
ContourFamily enumerate_anchored(Link anchor, int L_max);

// All contours of length <= L_max whose crossed-edge endpoints intersect the
// window. Guarded: throws capacity_error when the search universe is too
// large for explicit materialization (use the implicit sampler family then).
ContourFamily enumerate_window(const Box& window, int L_max);

// Anchored contour counts indexed by length (counts[n] = number of anchored
// contours with exactly n links), cached per (mode, L_max).
const std::vector<int64_t>& anchored_length_counts(AnchorSpec::Mode mode, int L_max);

// One translation class of contours, normalized, with the relative site and
// dual-vertex prints used by the samplers.
struct Shape {
    Contour contour;            // normalized representative
    int length = 0;
    std::vector<Pt> touch;      // touched sites, relative
    std::vector<Pt> vertices;   // dual vertices (doubled), relative
};

// All translation classes of contours with length <= L_max, sorted by
// (length, canonical encoding). Built from the anchored enumeration; every
// class of closed connected link sets appears exactly once.
struct ShapeTable {
    int L_max = 0;
    std::vector<Shape> shapes;

    static const ShapeTable& cached(int L_max);  // process-wide cache
};

}  // namespace cgas
