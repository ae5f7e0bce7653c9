#include "cgas/family.hpp"

#include <algorithm>
#include <cmath>

#include "cgas/errors.hpp"

namespace cgas {

namespace {

// Cumulative-rate root tables over an explicit list of refs.
struct ListTables : FamilyModel::RootTables {
    std::vector<BasisRef> refs;
    std::vector<double> cum;
};

BasisRef sample_from_list(const ListTables& t, Rng& rng) {
    if (t.refs.empty()) throw invariant_violation("root query has no members");
    return t.refs[rng.categorical(t.cum)];
}

}  // namespace

// ---------------------------------------------------------------------------
// ExplicitFamily

ExplicitFamily::ExplicitFamily(ContourFamily family, double beta)
    : FamilyModel(beta), family_(std::move(family)) {
    const size_t k = family_.members.size();
    rates_.resize(k);
    vertex_sets_.resize(k);
    touch_sets_.resize(k);
    neighbors_.resize(k);
    neighbor_cum_.resize(k);
    index_.reserve(k * 2);

    std::unordered_map<Pt, std::vector<int32_t>, PtHash> at_vertex;
    for (size_t i = 0; i < k; ++i) {
        const Contour& c = family_.members[i];
        rates_[i] = std::exp(-beta * c.length());
        total_rate_ += rates_[i];
        vertex_sets_[i] = c.vertex_set();
        touch_sets_[i] = c.touched_sites();
        index_.emplace(c, int32_t(i));
        for (Pt v : vertex_sets_[i]) at_vertex[v].push_back(int32_t(i));
    }
    // Incompatible pairs share a dual vertex; a member is always
    // incompatible with itself.
    std::vector<int32_t> seen(k, -1);
    for (size_t i = 0; i < k; ++i) {
        auto& nb = neighbors_[i];
        for (Pt v : vertex_sets_[i])
            for (int32_t j : at_vertex[v])
                if (seen[j] != int32_t(i)) {
                    seen[j] = int32_t(i);
                    nb.push_back(j);
                }
        std::sort(nb.begin(), nb.end());
        auto& cum = neighbor_cum_[i];
        cum.resize(nb.size());
        double run = 0;
        for (size_t t = 0; t < nb.size(); ++t) {
            run += rates_[nb[t]];
            cum[t] = run;
        }
    }
}

BasisRef ExplicitFamily::ref(int index) const {
    BasisRef b;
    b.shape = index;
    b.key = uint64_t(index);
    b.length = family_.members[index].length();
    return b;
}

std::shared_ptr<const FamilyModel::RootTables> ExplicitFamily::build_root_tables(
    const RootQuery& q) const {
    auto t = std::make_shared<ListTables>();
    auto add = [&](int32_t i) {
        t->refs.push_back(ref(i));
        t->rate += rates_[i];
        t->cum.push_back(t->rate);
    };
    switch (q.kind) {
        case RootQuery::Kind::whole_family:
            for (int32_t i = 0; i < int32_t(size()); ++i) add(i);
            break;
        case RootQuery::Kind::region:
            for (int32_t i = 0; i < int32_t(size()); ++i)
                for (Pt s : touch_sets_[i]) {
                    bool in = false;
                    for (const Box& b : q.boxes) in = in || b.contains(s);
                    if (in) {
                        add(i);
                        break;
                    }
                }
            break;
        case RootQuery::Kind::basis_set:
            for (const Contour& c : q.bases) add(resolve(c).shape);
            break;
    }
    return t;
}

BasisRef ExplicitFamily::sample_root(const RootTables& t, Rng& rng) const {
    return sample_from_list(static_cast<const ListTables&>(t), rng);
}

double ExplicitFamily::neighbor_rate_bound(const BasisRef& of, std::span<const Pt>) const {
    const auto& cum = neighbor_cum_[of.shape];
    return cum.empty() ? 0.0 : cum.back();
}

bool ExplicitFamily::sample_neighbor(const BasisRef& of, std::span<const Pt>, Rng& rng,
                                     BasisRef& out) const {
    const auto& nb = neighbors_[of.shape];
    const auto& cum = neighbor_cum_[of.shape];
    out = ref(nb[rng.categorical(cum)]);
    return true;  // exact per-member lists: nothing to thin
}

void ExplicitFamily::vertices(const BasisRef& b, std::vector<Pt>& out) const {
    out = vertex_sets_[b.shape];
}

bool ExplicitFamily::touches_boxes(const BasisRef& b, std::span<const Box> boxes) const {
    for (Pt s : touch_sets_[b.shape])
        for (const Box& bx : boxes)
            if (bx.contains(s)) return true;
    return false;
}

Contour ExplicitFamily::materialize(const BasisRef& b) const { return family_.members[b.shape]; }

BasisRef ExplicitFamily::resolve(const Contour& c) const {
    auto it = index_.find(c);
    if (it == index_.end()) throw invalid_parameter("contour is not a member of the family");
    return ref(it->second);
}

// ---------------------------------------------------------------------------
// WindowFamily

namespace {

// Placements of one shape whose touch print intersects a region (a union of
// boxes), compressed into y-segments of constant interval structure.
struct Placements {
    struct Seg {
        int32_t y0 = 0, y1 = 0;  // [y0, y1)
        std::vector<std::pair<int32_t, int32_t>> xint;  // inclusive, merged
        int64_t row_width = 0;
    };
    std::vector<Seg> segs;
    std::vector<double> seg_cum;  // by placement count
    int64_t total = 0;

    void build(const Shape& shape, std::span<const Box> region);
    Pt sample(Rng& rng) const;
};

void Placements::build(const Shape& shape, std::span<const Box> region) {
    segs.clear();
    seg_cum.clear();
    total = 0;

    // touch rows: py -> sorted px list
    std::vector<std::pair<int32_t, std::vector<int32_t>>> rows;
    for (Pt p : shape.touch) {
        if (rows.empty() || rows.back().first != p.y) rows.push_back({p.y, {}});
        rows.back().second.push_back(p.x);
    }
    std::sort(rows.begin(), rows.end());
    for (auto& r : rows) std::sort(r.second.begin(), r.second.end());

    std::vector<int32_t> crit;
    for (const Box& b : region)
        for (const auto& r : rows) {
            crit.push_back(b.ymin - r.first);
            crit.push_back(b.ymax - r.first + 1);
        }
    std::sort(crit.begin(), crit.end());
    crit.erase(std::unique(crit.begin(), crit.end()), crit.end());

    std::vector<std::pair<int32_t, int32_t>> raw;
    for (size_t s = 0; s + 1 < crit.size(); ++s) {
        int32_t y0 = crit[s], y1 = crit[s + 1];
        raw.clear();
        for (const Box& b : region)
            for (const auto& r : rows)
                if (y0 >= b.ymin - r.first && y0 <= b.ymax - r.first)
                    for (int32_t px : r.second) raw.push_back({b.xmin - px, b.xmax - px});
        if (raw.empty()) continue;
        std::sort(raw.begin(), raw.end());
        Seg seg;
        seg.y0 = y0;
        seg.y1 = y1;
        auto cur = raw[0];
        for (size_t i = 1; i < raw.size(); ++i) {
            if (raw[i].first <= cur.second + 1)
                cur.second = std::max(cur.second, raw[i].second);
            else {
                seg.xint.push_back(cur);
                cur = raw[i];
            }
        }
        seg.xint.push_back(cur);
        for (auto [a, b2] : seg.xint) seg.row_width += int64_t(b2) - a + 1;
        total += int64_t(seg.y1 - seg.y0) * seg.row_width;
        segs.push_back(std::move(seg));
    }
    seg_cum.resize(segs.size());
    double run = 0;
    for (size_t i = 0; i < segs.size(); ++i) {
        run += double(int64_t(segs[i].y1 - segs[i].y0) * segs[i].row_width);
        seg_cum[i] = run;
    }
}

Pt Placements::sample(Rng& rng) const {
    const Seg& seg = segs[rng.categorical(seg_cum)];
    int32_t y = seg.y0 + int32_t(rng.uniform_int(seg.y1 - seg.y0));
    int64_t w = rng.uniform_int(seg.row_width);
    for (auto [a, b] : seg.xint) {
        int64_t len = int64_t(b) - a + 1;
        if (w < len) return Pt{int32_t(a + w), y};
        w -= len;
    }
    return Pt{seg.xint.back().second, y};  // unreachable
}

}  // namespace

struct WindowFamily::Tables : FamilyModel::RootTables {
    std::vector<Placements> per_shape;
    std::vector<double> shape_cum;
    std::shared_ptr<const ListTables> basis_list;  // basis_set kind
};

WindowFamily::WindowFamily(int L_max, Box sim_box, double beta)
    : FamilyModel(beta), L_max_(L_max), sim_box_(sim_box), table_(ShapeTable::cached(L_max)) {
    if (sim_box.empty()) throw invalid_parameter("WindowFamily: empty simulation box");
    shape_rate_.resize(table_.shapes.size());
    anchor_cum_.reserve(table_.shapes.size() * 8);
    for (size_t s = 0; s < table_.shapes.size(); ++s) {
        shape_rate_[s] = std::exp(-beta * table_.shapes[s].length);
        shape_index_.emplace(table_.shapes[s].contour, int32_t(s));
        for (int32_t k = 0; k < int32_t(table_.shapes[s].vertices.size()); ++k) {
            anchor_entries_.push_back({int32_t(s), k});
            alpha_vert_ += shape_rate_[s];
            anchor_cum_.push_back(alpha_vert_);
        }
    }
    Box region[1] = {sim_box_};
    total_rate_ = rate_sum_over_region(region, 0);
}

double WindowFamily::rate_sum_over_region(std::span<const Box> region, int min_length) const {
    Placements pl;
    double sum = 0;
    for (size_t s = 0; s < table_.shapes.size(); ++s) {
        if (table_.shapes[s].length < min_length) continue;
        pl.build(table_.shapes[s], region);
        sum += double(pl.total) * shape_rate_[s];
    }
    return sum;
}

std::vector<int64_t> WindowFamily::placement_count_by_length(std::span<const Box> region) const {
    std::vector<int64_t> counts(L_max_ + 1, 0);
    Placements pl;
    for (const Shape& s : table_.shapes) {
        pl.build(s, region);
        counts[s.length] += pl.total;
    }
    return counts;
}

BasisRef WindowFamily::make_ref(int32_t shape, Pt offset) const {
    BasisRef b;
    b.shape = shape;
    b.offset = offset;
    b.length = table_.shapes[shape].length;
    constexpr int64_t bias = 1 << 21;
    b.key = (uint64_t(shape) << 44) | (uint64_t((offset.x + bias) & 0x3FFFFF) << 22) |
            uint64_t((offset.y + bias) & 0x3FFFFF);
    return b;
}

std::shared_ptr<const FamilyModel::RootTables> WindowFamily::build_root_tables(
    const RootQuery& q) const {
    auto t = std::make_shared<Tables>();
    if (q.kind == RootQuery::Kind::basis_set) {
        auto lt = std::make_shared<ListTables>();
        for (const Contour& c : q.bases) {
            BasisRef r = resolve(c);
            lt->rate += rate(r);
            lt->refs.push_back(r);
            lt->cum.push_back(lt->rate);
        }
        t->basis_list = lt;
        t->rate = lt->rate;
        return t;
    }
    std::vector<Box> region;
    if (q.kind == RootQuery::Kind::whole_family)
        region.push_back(sim_box_);
    else {
        for (const Box& b : q.boxes) {
            if (b.empty()) throw invalid_parameter("root query: empty window box");
            if (b.xmin < sim_box_.xmin || b.xmax > sim_box_.xmax || b.ymin < sim_box_.ymin ||
                b.ymax > sim_box_.ymax)
                throw invalid_parameter("root query window must lie inside the simulation box");
        }
        region = q.boxes;
    }
    t->per_shape.resize(table_.shapes.size());
    t->shape_cum.resize(table_.shapes.size());
    double run = 0;
    for (size_t s = 0; s < table_.shapes.size(); ++s) {
        t->per_shape[s].build(table_.shapes[s], region);
        run += double(t->per_shape[s].total) * shape_rate_[s];
        t->shape_cum[s] = run;
    }
    t->rate = run;
    return t;
}

BasisRef WindowFamily::sample_root(const RootTables& rt, Rng& rng) const {
    const auto& t = static_cast<const Tables&>(rt);
    if (t.basis_list) return sample_from_list(*t.basis_list, rng);
    size_t s = rng.categorical(t.shape_cum);
    return make_ref(int32_t(s), t.per_shape[s].sample(rng));
}

double WindowFamily::neighbor_rate_bound(const BasisRef&, std::span<const Pt> verts) const {
    return double(verts.size()) * alpha_vert_;
}

bool WindowFamily::sample_neighbor(const BasisRef&, std::span<const Pt> of_vertices, Rng& rng,
                                   BasisRef& out) const {
    Pt v = of_vertices[rng.uniform_int(int64_t(of_vertices.size()))];
    auto [s, k] = anchor_entries_[rng.categorical(anchor_cum_)];
    const Shape& shape = table_.shapes[s];
    Pt rel = shape.vertices[k];
    Pt off{(v.x - rel.x) / 2, (v.y - rel.y) / 2};

    // Multiplicity thinning: accept only when v is the smallest shared
    // vertex, so each incompatible contour keeps effective rate e^{-beta|.|}.
    for (Pt w : shape.vertices) {
        Pt abs{w.x + 2 * off.x, w.y + 2 * off.y};
        if (std::binary_search(of_vertices.begin(), of_vertices.end(), abs)) {
            if (!(abs == v)) return false;
            break;
        }
    }
    out = make_ref(s, off);
    return is_member(out);  // membership thinning against the simulation box
}

bool WindowFamily::is_member(const BasisRef& b) const {
    Box boxes[1] = {sim_box_};
    return touches_boxes(b, boxes);
}

void WindowFamily::vertices(const BasisRef& b, std::vector<Pt>& out) const {
    const Shape& s = table_.shapes[b.shape];
    out.resize(s.vertices.size());
    for (size_t i = 0; i < s.vertices.size(); ++i)
        out[i] = Pt{s.vertices[i].x + 2 * b.offset.x, s.vertices[i].y + 2 * b.offset.y};
}

bool WindowFamily::touches_boxes(const BasisRef& b, std::span<const Box> boxes) const {
    const Shape& s = table_.shapes[b.shape];
    for (Pt p : s.touch) {
        Pt abs = p + b.offset;
        for (const Box& bx : boxes)
            if (bx.contains(abs)) return true;
    }
    return false;
}

Contour WindowFamily::materialize(const BasisRef& b) const {
    return table_.shapes[b.shape].contour.translated(b.offset);
}

BasisRef WindowFamily::resolve(const Contour& c) const {
    Contour norm = c.normalized();
    auto it = shape_index_.find(norm);
    if (it == shape_index_.end())
        throw invalid_parameter("contour is not in the shape table (length > L_max?)");
    BasisRef r = make_ref(it->second, c.normalization_offset());
    if (!is_member(r))
        throw invalid_parameter("contour does not touch the simulation box");
    return r;
}

}  // namespace cgas
