#include "cgas/engine.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_set>

#include "cgas/alpha0.hpp"
#include "cgas/errors.hpp"

namespace cgas {

double certified_beta_gate(int gate_L_max) {
    return beta_star_bracket(0.05, gate_L_max).hi;
}

namespace {

void classify_impl(std::span<const Cylinder> cyl,
                   std::span<const std::vector<int32_t>> anc, std::vector<Label>& labels) {
    const size_t n = cyl.size();
    std::vector<int32_t> order(n);
    std::vector<int32_t> pos_of_id(n, -1);
    for (size_t i = 0; i < n; ++i) order[i] = int32_t(i);
    std::sort(order.begin(), order.end(), [&](int32_t x, int32_t y) {
        if (cyl[x].birth != cyl[y].birth) return cyl[x].birth < cyl[y].birth;
        return cyl[x].id < cyl[y].id;
    });
    std::vector<Label> by_id(n, Label::unknown);
    for (size_t i = 0; i < n; ++i) pos_of_id[cyl[i].id] = int32_t(i);

    for (int32_t idx : order) {
        const Cylinder& c = cyl[idx];
        bool kept = true;
        for (int32_t aid : anc[idx]) {
            int32_t apos = pos_of_id[aid];
            if (apos < 0) throw invariant_violation("classify: ancestor id missing from clan");
            const Cylinder& a = cyl[apos];
            bool earlier = a.birth < c.birth || (a.birth == c.birth && a.id < c.id);
            if (!earlier)
                throw invariant_violation("classify: ancestor edge does not point backwards");
            if (by_id[a.id] == Label::unknown)
                throw invariant_violation("classify: ancestor not yet classified (bad order)");
            if (by_id[a.id] == Label::kept) kept = false;
        }
        by_id[c.id] = kept ? Label::kept : Label::erased;
    }
    labels.resize(n);
    for (size_t i = 0; i < n; ++i) labels[i] = by_id[cyl[i].id];
}

bool cylinders_clash(const Cylinder& x, std::span<const Pt> vx, const Cylinder& y,
                     std::span<const Pt> vy) {
    if (!(x.birth < y.death && y.birth < x.death)) return false;
    size_t i = 0, j = 0;
    while (i < vx.size() && j < vy.size()) {
        if (vx[i] == vy[j]) return true;
        if (vx[i] < vy[j])
            ++i;
        else
            ++j;
    }
    return false;
}

}  // namespace

void classify(Clan& clan) { classify_impl(clan.cylinders, clan.ancestors, clan.labels); }

void validate_clan(const Clan& clan, const FamilyModel& fam) {
    const size_t n = clan.size();
    std::vector<std::vector<Pt>> vps(n);
    for (size_t i = 0; i < n; ++i) {
        if (clan.cylinders[i].id != int32_t(i))
            throw invariant_violation("clan: ids must equal container indices for validation");
        if (!(clan.cylinders[i].death > clan.cylinders[i].birth))
            throw invariant_violation("clan: death must exceed birth");
        fam.vertices(clan.cylinders[i].basis, vps[i]);
    }
    for (size_t i = 0; i < n; ++i) {
        std::unordered_set<int32_t> listed(clan.ancestors[i].begin(), clan.ancestors[i].end());
        if (listed.size() != clan.ancestors[i].size())
            throw invariant_violation("clan: duplicate ancestor edge");
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const Cylinder& c = clan.cylinders[i];
            const Cylinder& o = clan.cylinders[j];
            bool earlier = o.birth < c.birth || (o.birth == c.birth && o.id < c.id);
            bool clash = cylinders_clash(c, vps[i], o, vps[j]);
            bool is_edge = listed.count(int32_t(j)) > 0;
            if (is_edge && !(earlier && clash))
                throw invariant_violation("clan: edge to a non-ancestor");
            if (!is_edge && earlier && clash)
                throw invariant_violation("clan: missing first-generation ancestor edge");
        }
    }
}

// ---------------------------------------------------------------------------
// ClanSampler

struct ClanSampler::Ws {
    std::vector<Cylinder> cyl;
    std::vector<std::vector<int32_t>> anc;
    std::vector<std::vector<Pt>> vps;
    std::vector<int32_t> roots;
    std::vector<Label> labels;
    // (birth, id) max-heap of unprocessed cylinders
    std::priority_queue<std::pair<double, int32_t>> queue;
    std::unordered_map<Pt, std::vector<int32_t>, PtHash> vertex_index;
    std::unordered_map<Pt, double, PtHash> coverage;
    std::vector<int32_t> stamp;
    int32_t stamp_gen = 0;
    std::vector<Pt> scratch;
    size_t max_depth = 0;

    void reset() {
        cyl.clear();
        anc.clear();
        vps.clear();
        roots.clear();
        labels.clear();
        while (!queue.empty()) queue.pop();
        vertex_index.clear();
        coverage.clear();
        stamp.clear();
        stamp_gen = 0;
        max_depth = 0;
    }
};

ClanSampler::~ClanSampler() = default;
ClanSampler::ClanSampler(ClanSampler&&) noexcept = default;

ClanSampler::ClanSampler(std::shared_ptr<const FamilyModel> fam, RootQuery query,
                         ProcessParams params)
    : fam_(std::move(fam)), query_(std::move(query)), params_(params),
      ws_(std::make_unique<Ws>()) {
    if (params_.check_beta_gate) {
        double gate = certified_beta_gate(params_.gate_L_max);
        if (!(fam_->beta() > gate))
            throw invalid_parameter(
                "sampler refused: beta = " + std::to_string(fam_->beta()) +
                " is not strictly above the certified beta* upper bracket " +
                std::to_string(gate) + " (gate L_max " + std::to_string(params_.gate_L_max) +
                "); backward percolation cannot be ruled out");
    }
    tables_ = fam_->build_root_tables(query_);
    if (query_.kind == RootQuery::Kind::basis_set)
        for (const Contour& c : query_.bases) root_keys_.emplace(fam_->resolve(c).key, 1);
}

bool ClanSampler::root_covered(const BasisRef& b) const {
    switch (query_.kind) {
        case RootQuery::Kind::whole_family:
            return true;
        case RootQuery::Kind::region:
            return fam_->touches_boxes(b, query_.boxes);
        case RootQuery::Kind::basis_set:
            return root_keys_.count(b.key) > 0;
    }
    return false;
}

void ClanSampler::grow_into_ws(Rng& rng) {
    Ws& ws = *ws_;
    ws.reset();

    auto add_cylinder = [&](const BasisRef& basis, double birth, double death,
                            int32_t depth) -> int32_t {
        int32_t id = int32_t(ws.cyl.size());
        if (ws.cyl.size() >= params_.max_cylinders)
            throw budget_exceeded(
                "clan growth hit the cylinder budget (possible backward percolation); "
                "cylinders = " + std::to_string(ws.cyl.size()) +
                ", max depth reached = " + std::to_string(ws.max_depth),
                ws.cyl.size(), ws.max_depth);
        if (size_t(depth) > params_.max_depth)
            throw budget_exceeded(
                "clan growth hit the depth budget (possible backward percolation); "
                "cylinders = " + std::to_string(ws.cyl.size()) +
                ", depth = " + std::to_string(depth),
                ws.cyl.size(), size_t(depth));
        Cylinder c;
        c.id = id;
        c.basis = basis;
        c.birth = birth;
        c.death = death;
        c.depth = depth;
        ws.cyl.push_back(c);
        ws.anc.emplace_back();
        ws.vps.emplace_back();
        fam_->vertices(basis, ws.vps.back());
        for (Pt v : ws.vps.back()) ws.vertex_index[v].push_back(id);
        ws.stamp.push_back(0);
        ws.max_depth = std::max(ws.max_depth, size_t(depth));
        ws.queue.push({birth, id});
        return id;
    };

    // Roots: the stationary cylinders alive at time zero within the query.
    int64_t n_roots = rng.poisson(tables_->rate);
    for (int64_t i = 0; i < n_roots; ++i) {
        BasisRef basis = fam_->sample_root(*tables_, rng);
        double birth = -rng.exponential();
        double death = rng.exponential();
        ws.roots.push_back(add_cylinder(basis, birth, death, 0));
    }

    // Backward sweep in strictly decreasing birth order. Every new cylinder
    // is born before the instant being processed, so the order is global.
    while (!ws.queue.empty()) {
        auto [b, id] = ws.queue.top();
        ws.queue.pop();
        const BasisRef basis = ws.cyl[id].basis;
        const int32_t depth = ws.cyl[id].depth;

        // Known cylinders alive at b with a shared dual vertex.
        ++ws.stamp_gen;
        for (Pt v : ws.vps[id]) {
            auto it = ws.vertex_index.find(v);
            if (it == ws.vertex_index.end()) continue;
            for (int32_t j : it->second) {
                if (j == id || ws.stamp[j] == ws.stamp_gen) continue;
                ws.stamp[j] = ws.stamp_gen;
                const Cylinder& o = ws.cyl[j];
                bool earlier = o.birth < b || (o.birth == b && j < id);
                if (earlier && o.death > b) ws.anc[id].push_back(j);
            }
        }

        // Fresh cylinders alive at b, thinned to the part of the process not
        // yet revealed: per contour, death must not exceed the earliest
        // instant at which an earlier query already covered it.
        double bound = fam_->neighbor_rate_bound(basis, ws.vps[id]);
        int64_t k = rng.poisson(bound);
        for (int64_t j = 0; j < k; ++j) {
            BasisRef cand;
            if (!fam_->sample_neighbor(basis, ws.vps[id], rng, cand)) continue;
            fam_->vertices(cand, ws.scratch);
            double h = std::numeric_limits<double>::infinity();
            for (Pt v : ws.scratch) {
                auto it = ws.coverage.find(v);
                if (it != ws.coverage.end()) h = std::min(h, it->second);
            }
            if (root_covered(cand)) h = std::min(h, 0.0);

            double birth2, death2;
            if (std::isinf(h)) {
                // first reveal of this contour: plain stationary draw
                birth2 = b - rng.exponential();
                death2 = b + rng.exponential();
            } else {
                double delta = h - b;
                if (!(rng.uniform() < -std::expm1(-delta))) continue;
                birth2 = b - rng.exponential();
                death2 = b + rng.trunc_exponential(delta);
            }
            int32_t id2 = add_cylinder(cand, birth2, death2, depth + 1);
            ws.anc[id].push_back(id2);
        }
        std::sort(ws.anc[id].begin(), ws.anc[id].end());

        // This query covers every contour sharing a vertex with the basis.
        for (Pt v : ws.vps[id]) ws.coverage[v] = b;
    }

    classify_impl(ws.cyl, ws.anc, ws.labels);
}

Clan ClanSampler::grow_clan(Rng& rng, double t) {
    grow_into_ws(rng);
    Ws& ws = *ws_;
    Clan clan;
    clan.cylinders = ws.cyl;
    clan.ancestors = ws.anc;
    clan.roots = ws.roots;
    clan.labels = ws.labels;
    clan.max_depth = ws.max_depth;
    if (t != 0.0)
        for (Cylinder& c : clan.cylinders) {
            c.birth += t;
            c.death += t;
        }
    return clan;
}

std::vector<BasisRef> ClanSampler::sample_eta_zero(Rng& rng) {
    grow_into_ws(rng);
    Ws& ws = *ws_;
    std::vector<BasisRef> present;
    for (int32_t r : ws.roots)
        if (ws.labels[r] == Label::kept) present.push_back(ws.cyl[r].basis);
    return present;
}

std::vector<std::pair<BasisRef, int32_t>> ClanSampler::sample_free_network(Rng& rng) {
    int64_t n = rng.poisson(tables_->rate);
    std::unordered_map<uint64_t, std::pair<BasisRef, int32_t>> acc;
    for (int64_t i = 0; i < n; ++i) {
        BasisRef b = fam_->sample_root(*tables_, rng);
        auto [it, fresh] = acc.try_emplace(b.key, std::make_pair(b, 0));
        it->second.second++;
    }
    std::vector<std::pair<BasisRef, int32_t>> out;
    out.reserve(acc.size());
    for (auto& [k, v] : acc) out.push_back(v);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first.key < b.first.key; });
    return out;
}

// ---------------------------------------------------------------------------
// Forward dynamics

ForwardResult forward_dynamics(const FamilyModel& fam, std::span<const BasisRef> initial,
                               double duration, std::span<const BasisRef> probes, Rng& rng) {
    if (duration <= 0) throw invalid_parameter("forward_dynamics: duration must be > 0");
    auto tables = fam.build_root_tables(RootQuery::all());
    const double birth_rate = tables->rate;

    struct Present {
        BasisRef basis;
        std::vector<Pt> vertices;
    };
    std::vector<Present> present;
    std::unordered_map<Pt, char, PtHash> occupied;
    std::unordered_set<uint64_t> present_keys;

    auto try_insert = [&](const BasisRef& b) -> bool {
        Present p;
        p.basis = b;
        fam.vertices(b, p.vertices);
        for (Pt v : p.vertices)
            if (occupied.count(v)) return false;
        for (Pt v : p.vertices) occupied.emplace(v, 1);
        present_keys.insert(b.key);
        present.push_back(std::move(p));
        return true;
    };
    for (const BasisRef& b : initial)
        if (!try_insert(b))
            throw invalid_parameter("forward_dynamics: initial configuration not compatible");

    std::unordered_map<uint64_t, double> occ_time;
    for (const BasisRef& p : probes) occ_time.emplace(p.key, 0.0);

    ForwardResult res;
    double t = 0;
    while (true) {
        double rate = birth_rate + double(present.size());
        double dt = rate > 0 ? rng.exponential() / rate : duration - t;
        bool last = t + dt >= duration;
        double step = last ? duration - t : dt;
        for (auto& [key, acc] : occ_time)
            if (present_keys.count(key)) acc += step;
        t += step;
        if (last) break;

        if (rng.uniform() * rate < birth_rate) {
            res.births_attempted++;
            if (try_insert(fam.sample_root(*tables, rng))) res.births_accepted++;
        } else {
            size_t idx = size_t(rng.uniform_int(int64_t(present.size())));
            for (Pt v : present[idx].vertices) occupied.erase(v);
            present_keys.erase(present[idx].basis.key);
            present[idx] = std::move(present.back());
            present.pop_back();
            res.deaths++;
        }
    }
    res.duration = duration;
    for (const BasisRef& p : probes)
        res.probe_occupation.push_back({p.key, occ_time[p.key] / duration});
    for (const Present& p : present) res.final_config.push_back(p.basis);
    std::sort(res.final_config.begin(), res.final_config.end(),
              [](const BasisRef& a, const BasisRef& b) { return a.key < b.key; });
    return res;
}

// ---------------------------------------------------------------------------
// Coupling

bool clans_incompatible(const Clan& a, const Clan& b, const FamilyModel& fam) {
    std::unordered_map<Pt, std::vector<int32_t>, PtHash> index;
    std::vector<std::vector<Pt>> va(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        fam.vertices(a.cylinders[i].basis, va[i]);
        for (Pt v : va[i]) index[v].push_back(int32_t(i));
    }
    std::vector<Pt> vb;
    for (const Cylinder& cb : b.cylinders) {
        fam.vertices(cb.basis, vb);
        for (Pt v : vb) {
            auto it = index.find(v);
            if (it == index.end()) continue;
            for (int32_t i : it->second) {
                const Cylinder& ca = a.cylinders[i];
                if (ca.birth < cb.death && cb.birth < ca.death) return true;
            }
        }
    }
    return false;
}

Clan subclan_for_region(const Clan& joint, Box region, const FamilyModel& fam) {
    Box boxes[1] = {region};
    std::vector<char> keep(joint.size(), 0);
    std::vector<int32_t> stack;
    for (int32_t r : joint.roots)
        if (fam.touches_boxes(joint.cylinders[r].basis, boxes)) {
            keep[r] = 1;
            stack.push_back(r);
        }
    std::vector<int32_t> sub_roots(stack);
    while (!stack.empty()) {
        int32_t i = stack.back();
        stack.pop_back();
        for (int32_t aid : joint.ancestors[i])
            if (!keep[aid]) {
                keep[aid] = 1;
                stack.push_back(aid);
            }
    }
    std::vector<int32_t> remap(joint.size(), -1);
    Clan out;
    for (size_t i = 0; i < joint.size(); ++i)
        if (keep[i]) {
            remap[i] = int32_t(out.cylinders.size());
            Cylinder c = joint.cylinders[i];
            c.id = remap[i];
            out.cylinders.push_back(c);
            out.ancestors.emplace_back();
            if (!joint.labels.empty()) out.labels.push_back(joint.labels[i]);
        }
    for (size_t i = 0; i < joint.size(); ++i)
        if (keep[i])
            for (int32_t aid : joint.ancestors[i])
                out.ancestors[remap[i]].push_back(remap[aid]);
    for (int32_t r : sub_roots) out.roots.push_back(remap[r]);
    std::sort(out.roots.begin(), out.roots.end());
    out.max_depth = joint.max_depth;
    return out;
}

CoupledSampler::CoupledSampler(std::shared_ptr<const FamilyModel> fam, Box region_a, Box region_b,
                               ProcessParams params)
    : a_(region_a), b_(region_b),
      sa_(fam, RootQuery::window(region_a), params),
      sb_(fam, RootQuery::window(region_b), params),
      sab_(fam, RootQuery::regions({region_a, region_b}), params),
      fam_(fam) {
    if (region_a.empty() || region_b.empty())
        throw invalid_parameter("coupled clans: empty region");
    bool overlap = !(region_a.xmax < region_b.xmin || region_b.xmax < region_a.xmin ||
                     region_a.ymax < region_b.ymin || region_b.ymax < region_a.ymin);
    if (overlap) throw invalid_parameter("coupled clans: regions must be disjoint");
}

CoupledClans CoupledSampler::run(uint64_t seed) {
    Rng rng_a(derive_seed(seed, 0xA11CE));
    Rng rng_b(derive_seed(seed, 0xB0B));
    Rng rng_j(derive_seed(seed, 0x901177));

    CoupledClans out;
    out.hat_a = sa_.grow_clan(rng_a);
    out.hat_b = sb_.grow_clan(rng_b);
    out.incompatible = clans_incompatible(out.hat_a, out.hat_b, *fam_);
    if (!out.incompatible) {
        out.clan_a = out.hat_a;
        out.clan_b = out.hat_b;
    } else {
        Clan joint = sab_.grow_clan(rng_j);
        out.clan_a = subclan_for_region(joint, a_, *fam_);
        out.clan_b = subclan_for_region(joint, b_, *fam_);
    }
    return out;
}

}  // namespace cgas
