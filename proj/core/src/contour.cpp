#include "cgas/contour.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

#include "cgas/errors.hpp"

namespace cgas {

bool links_closed(const std::vector<Link>& links) {
    std::unordered_map<Pt, int, PtHash> degree;
    degree.reserve(links.size() * 2);
    for (const Link& l : links)
        for (Pt v : l.endpoints()) degree[v]++;
    for (const auto& [v, d] : degree)
        if (d % 2 != 0) return false;
    return true;
}

bool links_connected(const std::vector<Link>& links) {
    if (links.size() <= 1) return true;
    std::unordered_map<Pt, std::vector<int>, PtHash> at_vertex;
    at_vertex.reserve(links.size() * 2);
    for (int i = 0; i < int(links.size()); ++i)
        for (Pt v : links[i].endpoints()) at_vertex[v].push_back(i);

    std::vector<char> seen(links.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    size_t reached = 1;
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (Pt v : links[i].endpoints())
            for (int j : at_vertex[v])
                if (!seen[j]) {
                    seen[j] = 1;
                    ++reached;
                    stack.push_back(j);
                }
    }
    return reached == links.size();
}

void Contour::check_is_contour(const std::vector<Link>& links) {
    if (links.empty()) throw invariant_violation("contour: empty link set");
    for (const Link& l : links)
        if (!l.valid()) throw invariant_violation("contour: link midpoint parity is wrong");
    if (!links_closed(links)) throw invariant_violation("contour: link set is not closed");
    if (!links_connected(links)) throw invariant_violation("contour: link set is not connected");
}

Contour Contour::from_links(std::vector<Link> links) {
    std::sort(links.begin(), links.end());
    links.erase(std::unique(links.begin(), links.end()), links.end());
    check_is_contour(links);
    Contour c;
    c.links_ = std::move(links);
    c.recompute_bbox();
    return c;
}

static std::vector<Link> boundary_links(const std::vector<Pt>& cells) {
    std::unordered_map<Pt, char, PtHash> in;
    in.reserve(cells.size() * 2);
    for (Pt c : cells) in[c] = 1;
    std::vector<Link> out;
    out.reserve(cells.size() * 4);
    static constexpr Pt dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (Pt c : cells)
        for (Pt d : dirs) {
            Pt n = c + d;
            if (!in.count(n)) out.push_back(Link{Pt{c.x + n.x, c.y + n.y}});
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Contour Contour::boundary_of_cells(const std::vector<Pt>& cells) {
    auto links = boundary_links(cells);
    return from_links(std::move(links));
}

std::optional<Contour> Contour::try_boundary_of_cells(const std::vector<Pt>& cells) {
    auto links = boundary_links(cells);
    if (links.empty() || !links_connected(links)) return std::nullopt;
    Contour c;
    c.links_ = std::move(links);  // boundary of a cell set is always closed
    c.recompute_bbox();
    return c;
}

void Contour::recompute_bbox() {
    bbox_ = Box{};
    if (links_.empty()) return;
    bbox_.xmin = bbox_.xmax = links_[0].mid.x;
    bbox_.ymin = bbox_.ymax = links_[0].mid.y;
    for (const Link& l : links_) {
        bbox_.xmin = std::min(bbox_.xmin, l.mid.x);
        bbox_.xmax = std::max(bbox_.xmax, l.mid.x);
        bbox_.ymin = std::min(bbox_.ymin, l.mid.y);
        bbox_.ymax = std::max(bbox_.ymax, l.mid.y);
    }
}

std::vector<Pt> Contour::vertex_set() const {
    std::vector<Pt> vs;
    vs.reserve(links_.size() * 2);
    for (const Link& l : links_)
        for (Pt v : l.endpoints()) vs.push_back(v);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

std::vector<Pt> Contour::touched_sites() const {
    std::vector<Pt> ts;
    ts.reserve(links_.size() * 2);
    for (const Link& l : links_)
        for (Pt s : l.crossed_edge_sites()) ts.push_back(s);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

bool Contour::contains_link(Link l) const {
    return std::binary_search(links_.begin(), links_.end(), l);
}

bool Contour::touches(const Box& window) const {
    for (const Link& l : links_)
        for (Pt s : l.crossed_edge_sites())
            if (window.contains(s)) return true;
    return false;
}

Contour Contour::translated(Pt by_sites) const {
    Contour c;
    c.links_.reserve(links_.size());
    Pt d{2 * by_sites.x, 2 * by_sites.y};
    for (const Link& l : links_) c.links_.push_back(Link{l.mid + d});
    c.recompute_bbox();  // order is preserved under translation
    return c;
}

Pt Contour::normalization_offset() const {
    auto floor_div2 = [](int32_t v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); };
    return Pt{floor_div2(bbox_.xmin), floor_div2(bbox_.ymin)};
}

Contour Contour::normalized() const {
    Pt off = normalization_offset();
    return translated(Pt{-off.x, -off.y});
}

std::string Contour::to_line() const {
    std::string s;
    char buf[32];
    for (size_t i = 0; i < links_.size(); ++i) {
        if (i) s.push_back(' ');
        std::snprintf(buf, sizeof buf, "%d,%d", links_[i].mid.x, links_[i].mid.y);
        s += buf;
    }
    return s;
}

Contour Contour::parse_line(const std::string& line) {
    std::vector<Link> links;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) {
        auto comma = tok.find(',');
        if (comma == std::string::npos)
            throw invalid_parameter("contour line: expected 'mx,my' pairs, got '" + tok + "'");
        Link l{int32_t(std::strtol(tok.c_str(), nullptr, 10)),
               int32_t(std::strtol(tok.c_str() + comma + 1, nullptr, 10))};
        links.push_back(l);
    }
    return from_links(std::move(links));
}

size_t Contour::Hash::operator()(const Contour& c) const {
    uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (const Link& l : c.links()) {
        uint64_t z = pack_pt(l.mid) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= z * 0xbf58476d1ce4e5b9ULL;
    }
    return size_t(h);
}

bool compatible(const Contour& a, const Contour& b) {
    // Merge-walk over the sorted vertex sets.
    auto va = a.vertex_set(), vb = b.vertex_set();
    size_t i = 0, j = 0;
    while (i < va.size() && j < vb.size()) {
        if (va[i] == vb[j]) return false;
        if (va[i] < vb[j])
            ++i;
        else
            ++j;
    }
    return true;
}

double contour_distance(const Contour& a, const Contour& b, Norm norm) {
    double best = std::numeric_limits<double>::infinity();
    for (const Link& la : a.links())
        for (const Link& lb : b.links()) {
            double dx = 0.5 * double(la.mid.x - lb.mid.x);
            double dy = 0.5 * double(la.mid.y - lb.mid.y);
            double d = norm == Norm::euclid ? std::hypot(dx, dy)
                                            : std::max(std::abs(dx), std::abs(dy));
            best = std::min(best, d);
        }
    return best;
}

}  // namespace cgas
