#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace cgas {

// Integer lattice point (a site of Z^2, or a doubled half-integer point).
struct Pt {
    int32_t x = 0;
    int32_t y = 0;
    friend bool operator==(const Pt&, const Pt&) = default;
    friend auto operator<=>(const Pt&, const Pt&) = default;
    Pt operator+(Pt o) const { return {x + o.x, y + o.y}; }
    Pt operator-(Pt o) const { return {x - o.x, y - o.y}; }
};

inline uint64_t pack_pt(Pt p) {
    return (uint64_t(uint32_t(p.x)) << 32) | uint64_t(uint32_t(p.y));
}

struct PtHash {
    size_t operator()(Pt p) const {
        uint64_t z = pack_pt(p);
        z ^= z >> 33;
        z *= 0xff51afd7ed558ccdULL;
        z ^= z >> 33;
        z *= 0xc4ceb9fe1a85ec53ULL;
        z ^= z >> 33;
        return size_t(z);
    }
};

// Inclusive axis-aligned box of sites.
struct Box {
    int32_t xmin = 0, ymin = 0, xmax = -1, ymax = -1;

    static Box centered(int32_t side) {
        Box b;
        b.xmin = -(side / 2);
        b.ymin = -(side / 2);
        b.xmax = b.xmin + side - 1;
        b.ymax = b.ymin + side - 1;
        return b;
    }
    bool empty() const { return xmax < xmin || ymax < ymin; }
    int64_t width() const { return empty() ? 0 : int64_t(xmax) - xmin + 1; }
    int64_t height() const { return empty() ? 0 : int64_t(ymax) - ymin + 1; }
    int64_t area() const { return width() * height(); }
    bool contains(Pt p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    Box expanded(int32_t r) const { return {xmin - r, ymin - r, xmax + r, ymax + r}; }
    friend bool operator==(const Box&, const Box&) = default;
};

// A dual-lattice link, identified by its doubled midpoint: the link dual to
// the primal edge between sites x and x+e_i has doubled midpoint 2x+e_i, so
// exactly one coordinate is odd and that parity names the crossed-edge axis.
struct Link {
    Pt mid;  // doubled midpoint

    Link() = default;
    explicit Link(Pt m) : mid(m) {}
    Link(int32_t mx, int32_t my) : mid{mx, my} {}

    // Axis of the primal edge this link crosses (0 or 1).
    int axis() const { return (mid.x & 1) ? 0 : 1; }
    bool valid() const { return ((mid.x & 1) ^ (mid.y & 1)) == 1; }

    // The two endpoints of the link are dual vertices (both coordinates odd
    // in doubled coordinates).
    std::array<Pt, 2> endpoints() const {
        if (axis() == 0) return {Pt{mid.x, mid.y - 1}, Pt{mid.x, mid.y + 1}};
        return {Pt{mid.x - 1, mid.y}, Pt{mid.x + 1, mid.y}};
    }

    // Sites at the two ends of the crossed primal edge.
    std::array<Pt, 2> crossed_edge_sites() const {
        if (axis() == 0) return {Pt{(mid.x - 1) / 2, mid.y / 2}, Pt{(mid.x + 1) / 2, mid.y / 2}};
        return {Pt{mid.x / 2, (mid.y - 1) / 2}, Pt{mid.x / 2, (mid.y + 1) / 2}};
    }

    friend bool operator==(const Link&, const Link&) = default;
    friend auto operator<=>(const Link&, const Link&) = default;
};

// Dual link crossing the primal edge between `site` and `site + e_axis`.
inline Link link_between(Pt site, int axis) {
    if (axis == 0) return Link{2 * site.x + 1, 2 * site.y};
    return Link{2 * site.x, 2 * site.y + 1};
}

enum class Norm { euclid, sup };

}  // namespace cgas
