#include "cgas/enumerate.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

#include "cgas/errors.hpp"

namespace cgas {

void ContourFamily::validate() const {
    for (size_t i = 0; i < members.size(); ++i) {
        Contour check = Contour::from_links(members[i].links());
        if (!(check == members[i]))
            throw invariant_violation("family: member not canonical");
        if (i > 0 && !(members[i - 1] < members[i]))
            throw invariant_violation("family: members not strictly sorted (duplicate?)");
        if (spec.kind != FamilySpec::Kind::hand_built && spec.L_max > 0 &&
            members[i].length() > spec.L_max)
            throw invariant_violation("family: member exceeds L_max");
    }
}

ContourFamily ContourFamily::hand_built(std::vector<Contour> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    ContourFamily f;
    f.members = std::move(members);
    f.spec.kind = FamilySpec::Kind::hand_built;
    int lmax = 0;
    for (const Contour& c : f.members) lmax = std::max(lmax, c.length());
    f.spec.L_max = lmax;
    return f;
}

namespace {

void require_even_lmax(int L_max) {
    if (L_max < 4 || L_max % 2 != 0)
        throw invalid_parameter("L_max must be even and >= 4, got " + std::to_string(L_max));
}

// DFS over king-connected cell sets. Every connected superset of {root}
// avoiding the forbidden cells is visited exactly once; visit() filters and
// collects contours. Boundary length is maintained incrementally; only the
// bbox half-perimeter and the cell-count bound prune (the boundary length
// itself is not monotone under cell insertion).
class CellSetEnumerator {
public:
    CellSetEnumerator(int L_max, std::vector<Contour>& out)
        : L_max_(L_max), max_cells_((L_max * L_max) / 16), out_(out) {}

    // rooted_floor: when set, only cells lexicographically >= *rooted_floor
    // may appear (canonical rooting for window enumeration).
    void run(Pt root, const std::vector<Pt>& forbidden,
             const Box* universe, const Pt* rooted_floor,
             const Box* must_touch_window) {
        universe_ = universe;
        floor_ = rooted_floor;
        window_ = must_touch_window;
        state_.clear();
        cells_.clear();
        ext_.clear();
        for (Pt f : forbidden) state_[f] = Banned;

        if (!usable(root)) return;
        state_[root] = InSet;
        cells_.push_back(root);
        cbox_ = Box{root.x, root.y, root.x, root.y};
        boundary_ = 4;
        append_neighbors(root);
        rec(0);
    }

private:
    enum CellState { InSet = 1, Queued = 2, Banned = 3 };

    bool usable(Pt c) const {
        if (universe_ && !universe_->contains(c)) return false;
        if (floor_ && c < *floor_) return false;
        return true;
    }

    Box grown(Pt c) const {
        Box b = cbox_;
        b.xmin = std::min(b.xmin, c.x);
        b.xmax = std::max(b.xmax, c.x);
        b.ymin = std::min(b.ymin, c.y);
        b.ymax = std::max(b.ymax, c.y);
        return b;
    }

    int edge_neighbors_in_set(Pt c) const {
        static constexpr Pt d4[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        int n = 0;
        for (Pt d : d4) {
            auto it = state_.find(c + d);
            if (it != state_.end() && it->second == InSet) ++n;
        }
        return n;
    }

    void append_neighbors(Pt c) {
        static constexpr Pt d8[8] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                     {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
        for (Pt d : d8) {
            Pt n = c + d;
            if (!usable(n)) continue;
            auto [it, fresh] = state_.try_emplace(n, Queued);
            if (fresh) ext_.push_back(n);
        }
    }

    void visit() {
        if (boundary_ > L_max_) return;
        if (auto c = Contour::try_boundary_of_cells(cells_)) {
            if (window_ && !c->touches(*window_)) return;
            out_.push_back(std::move(*c));
        }
    }

    void rec(size_t ext_lo) {
        visit();
        size_t ext_hi = ext_.size();
        for (size_t i = ext_lo; i < ext_hi; ++i) {
            Pt c = ext_[i];
            Box nb = grown(c);
            if (int(cells_.size()) + 1 <= max_cells_ &&
                2 * (nb.width() + nb.height()) <= L_max_) {
                Box saved_box = cbox_;
                int saved_boundary = boundary_;
                cbox_ = nb;
                boundary_ += 4 - 2 * edge_neighbors_in_set(c);
                state_[c] = InSet;
                cells_.push_back(c);
                append_neighbors(c);
                rec(i + 1);
                // undo: drop appended candidates, restore c
                while (ext_.size() > ext_hi) {
                    state_.erase(ext_.back());
                    ext_.pop_back();
                }
                cells_.pop_back();
                cbox_ = saved_box;
                boundary_ = saved_boundary;
            }
            state_[c] = Banned;  // excluded for the rest of this subtree
        }
        for (size_t i = ext_lo; i < ext_hi; ++i) state_[ext_[i]] = Queued;
    }

    int L_max_;
    int max_cells_;
    std::vector<Contour>& out_;
    const Box* universe_ = nullptr;
    const Pt* floor_ = nullptr;
    const Box* window_ = nullptr;

    std::unordered_map<Pt, int, PtHash> state_;
    std::vector<Pt> cells_;
    std::vector<Pt> ext_;
    Box cbox_;
    int boundary_ = 0;
};

}  // namespace

ContourFamily enumerate_anchored(const AnchorSpec& anchor, int L_max) {
    require_even_lmax(L_max);
    std::vector<Contour> out;
    CellSetEnumerator en(L_max, out);
    if (anchor.mode == AnchorSpec::Mode::fixed_link) {
        if (!anchor.link.valid()) throw invalid_parameter("anchor link has wrong parity");
        auto ends = anchor.link.crossed_edge_sites();
        // Exactly one endpoint of the crossed edge lies in the cell set, so
        // the anchor link is in the boundary by construction.
        en.run(ends[0], {ends[1]}, nullptr, nullptr, nullptr);
        en.run(ends[1], {ends[0]}, nullptr, nullptr, nullptr);
    } else {
        en.run(Pt{0, 0}, {}, nullptr, nullptr, nullptr);
    }
    std::sort(out.begin(), out.end());
    ContourFamily fam;
    fam.members = std::move(out);
    fam.spec.kind = FamilySpec::Kind::anchored;
    fam.spec.L_max = L_max;
    fam.spec.anchor = anchor;
    return fam;
}

ContourFamily enumerate_anchored(Link anchor, int L_max) {
    AnchorSpec a;
    a.mode = AnchorSpec::Mode::fixed_link;
    a.link = anchor;
    return enumerate_anchored(a, L_max);
}

ContourFamily enumerate_window(const Box& window, int L_max) {
    require_even_lmax(L_max);
    if (window.empty()) throw invalid_parameter("enumerate_window: empty window");
    Box universe = window.expanded(L_max / 2 + 1);
    if (universe.area() > 250000)
        throw capacity_error(
            "enumerate_window: universe of " + std::to_string(universe.area()) +
            " cells is too large to materialize; use the window sampler family");

    std::vector<Contour> out;
    CellSetEnumerator en(L_max, out);
    for (int32_t y = universe.ymin; y <= universe.ymax; ++y)
        for (int32_t x = universe.xmin; x <= universe.xmax; ++x) {
            Pt root{x, y};
            en.run(root, {}, &universe, &root, &window);
        }
    std::sort(out.begin(), out.end());
    ContourFamily fam;
    fam.members = std::move(out);
    fam.spec.kind = FamilySpec::Kind::window;
    fam.spec.L_max = L_max;
    fam.spec.window = window;
    return fam;
}

namespace {
std::mutex cache_mutex;
std::map<std::pair<int, int>, std::vector<int64_t>> count_cache;
std::map<int, ShapeTable> shape_cache;
}  // namespace

const std::vector<int64_t>& anchored_length_counts(AnchorSpec::Mode mode, int L_max) {
    std::lock_guard lock(cache_mutex);
    auto key = std::make_pair(int(mode), L_max);
    auto it = count_cache.find(key);
    if (it != count_cache.end()) return it->second;

    AnchorSpec a;
    a.mode = mode;
    ContourFamily fam = enumerate_anchored(a, L_max);
    std::vector<int64_t> counts(L_max + 1, 0);
    for (const Contour& c : fam.members) counts[c.length()]++;
    return count_cache.emplace(key, std::move(counts)).first->second;
}

const ShapeTable& ShapeTable::cached(int L_max) {
    std::lock_guard lock(cache_mutex);
    auto it = shape_cache.find(L_max);
    if (it != shape_cache.end()) return it->second;

    // Every contour has links of both axes, so the fixed-link anchored
    // enumeration reaches every translation class.
    AnchorSpec a;
    ContourFamily fam = enumerate_anchored(a, L_max);
    std::vector<Contour> classes;
    classes.reserve(fam.members.size() / 2);
    for (const Contour& c : fam.members) classes.push_back(c.normalized());
    std::sort(classes.begin(), classes.end(), [](const Contour& x, const Contour& y) {
        if (x.length() != y.length()) return x.length() < y.length();
        return x < y;
    });
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

    ShapeTable table;
    table.L_max = L_max;
    table.shapes.reserve(classes.size());
    for (Contour& c : classes) {
        Shape s;
        s.length = c.length();
        s.touch = c.touched_sites();
        s.vertices = c.vertex_set();
        s.contour = std::move(c);
        table.shapes.push_back(std::move(s));
    }
    return shape_cache.emplace(L_max, std::move(table)).first->second;
}

}  // namespace cgas
