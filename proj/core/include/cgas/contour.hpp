#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cgas/geometry.hpp"

namespace cgas {

// A Peierls contour in d = 2: a closed, connected set of dual-lattice links.
// Links are kept sorted by (midpoint, axis), which makes equal contours have
// identical encodings and the encoding hashable and order-stable.
class Contour {
public:
    Contour() = default;

    // Canonicalizes (sorts, dedups) and validates closedness/connectedness.
    // Throws invariant_violation if the link set is not a contour.
    static Contour from_links(std::vector<Link> links);

    // Boundary of a finite set of sites ("minus islands"): the links dual to
    // edges with exactly one endpoint in `cells`. Throws if the boundary is
    // not connected (then the cell set describes several contours at once).
    static Contour boundary_of_cells(const std::vector<Pt>& cells);

    // Same, but returns nullopt instead of throwing when the boundary is
    // disconnected. Used by enumeration hot paths.
    static std::optional<Contour> try_boundary_of_cells(const std::vector<Pt>& cells);

    const std::vector<Link>& links() const { return links_; }
    int length() const { return int(links_.size()); }
    bool empty() const { return links_.empty(); }

    // Bounding box of doubled midpoints.
    const Box& bbox() const { return bbox_; }

    // Dual vertices touched by the link set, sorted, deduplicated.
    std::vector<Pt> vertex_set() const;

    // Sites incident to the crossed primal edges, sorted, deduplicated.
    // This is the set used for "contour intersects window" tests.
    std::vector<Pt> touched_sites() const;

    bool contains_link(Link l) const;
    bool touches(const Box& window) const;

    Contour translated(Pt by_sites) const;
    // Translate so the minimal doubled midpoint lands in {0,1}^2; the result
    // is the canonical representative of the translation class.
    Contour normalized() const;
    Pt normalization_offset() const;  // sites subtracted by normalized()

    std::string to_line() const;                    // "mx,my mx,my ..."
    static Contour parse_line(const std::string&);  // inverse of to_line

    // Ordering and equality are on the canonical link sequence only.
    friend bool operator==(const Contour& a, const Contour& b) { return a.links_ == b.links_; }
    friend bool operator<(const Contour& a, const Contour& b) { return a.links_ < b.links_; }

    struct Hash {
        size_t operator()(const Contour& c) const;
    };

private:
    std::vector<Link> links_;
    Box bbox_;

    void recompute_bbox();
    static void check_is_contour(const std::vector<Link>& links);
};

// True iff every touched dual vertex is covered by an even number of links.
bool links_closed(const std::vector<Link>& links);
// True iff the link set is connected under shared-endpoint adjacency.
bool links_connected(const std::vector<Link>& links);

// Compatibility: no link of `a` shares a dual vertex with a link of `b`.
// Symmetric; a nonempty contour is never compatible with itself.
bool compatible(const Contour& a, const Contour& b);

// d(a,b) = min over link-midpoint pairs of |x - y| in the chosen norm
// (midpoints are half-integer points; the doubled encoding is halved).
double contour_distance(const Contour& a, const Contour& b, Norm norm = Norm::euclid);

}  // namespace cgas
