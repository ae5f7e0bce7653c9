#pragma once

#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "cgas/cylinder.hpp"
#include "cgas/enumerate.hpp"
#include "cgas/rng.hpp"

namespace cgas {

// Which cylinders count as roots of a clan query at time zero.
struct RootQuery {
    enum class Kind { whole_family, region, basis_set };
    Kind kind = Kind::whole_family;
    std::vector<Box> boxes;        // region kind
    std::vector<Contour> bases;    // basis_set kind

    static RootQuery all() { return {}; }
    static RootQuery window(Box b) { return {Kind::region, {b}, {}}; }
    static RootQuery regions(std::vector<Box> bs) { return {Kind::region, std::move(bs), {}}; }
    static RootQuery basis_set(std::vector<Contour> cs) {
        return {Kind::basis_set, {}, std::move(cs)};
    }
};

// A (possibly implicit) finite contour family with the sampling hooks the
// clan engine needs: root-rate tables for a query, and an upper-bounded
// candidate sampler for the contours incompatible with a given basis
// (exactness is restored by thinning).
class FamilyModel {
public:
    virtual ~FamilyModel() = default;

    double beta() const { return beta_; }
    virtual double total_rate() const = 0;

    struct RootTables {
        virtual ~RootTables() = default;
        double rate = 0;
    };
    virtual std::shared_ptr<const RootTables> build_root_tables(const RootQuery&) const = 0;
    virtual BasisRef sample_root(const RootTables&, Rng&) const = 0;

    // Superposed upper rate for the incompatibility neighborhood of `of`
    // (every contour sharing a dual vertex with it, counted once per shared
    // vertex), and one candidate draw. Returns false when the candidate is
    // thinned away (multiplicity or family-membership rejection).
    virtual double neighbor_rate_bound(const BasisRef& of,
                                       std::span<const Pt> of_vertices) const = 0;
    virtual bool sample_neighbor(const BasisRef& of, std::span<const Pt> of_vertices, Rng& rng,
                                 BasisRef& out) const = 0;

    virtual double rate(const BasisRef&) const = 0;  // e^{-beta |gamma|}
    virtual void vertices(const BasisRef&, std::vector<Pt>& out) const = 0;  // sorted
    virtual bool touches_boxes(const BasisRef&, std::span<const Box>) const = 0;
    virtual Contour materialize(const BasisRef&) const = 0;
    virtual BasisRef resolve(const Contour&) const = 0;  // throws if not a member

protected:
    explicit FamilyModel(double beta) : beta_(beta) {}
    double beta_ = 0;
};

// Backend over an explicit ContourFamily: exact per-member incompatibility
// lists, no thinning.
class ExplicitFamily : public FamilyModel {
public:
    ExplicitFamily(ContourFamily family, double beta);

    double total_rate() const override { return total_rate_; }
    std::shared_ptr<const RootTables> build_root_tables(const RootQuery&) const override;
    BasisRef sample_root(const RootTables&, Rng&) const override;
    double neighbor_rate_bound(const BasisRef&, std::span<const Pt>) const override;
    bool sample_neighbor(const BasisRef&, std::span<const Pt>, Rng&, BasisRef&) const override;
    double rate(const BasisRef& b) const override { return rates_[b.shape]; }
    void vertices(const BasisRef&, std::vector<Pt>& out) const override;
    bool touches_boxes(const BasisRef&, std::span<const Box>) const override;
    Contour materialize(const BasisRef&) const override;
    BasisRef resolve(const Contour&) const override;

    const ContourFamily& family() const { return family_; }
    BasisRef ref(int index) const;
    size_t size() const { return family_.members.size(); }

private:
    ContourFamily family_;
    std::vector<double> rates_;
    std::vector<std::vector<Pt>> vertex_sets_;
    std::vector<std::vector<Pt>> touch_sets_;
    std::vector<std::vector<int32_t>> neighbors_;      // incompatible members (incl. self)
    std::vector<std::vector<double>> neighbor_cum_;    // per-member cumulative rates
    std::unordered_map<Contour, int32_t, Contour::Hash> index_;
    double total_rate_ = 0;

    struct Tables;
};

// Backend over the implicit family of all contours with length <= L_max
// whose link set touches the simulation box. Contours are (shape class,
// translation) pairs; nothing is materialized. Root-rate tables enumerate
// translate placements of each class against a region, compressed into row
// segments; neighbor candidates come from a dual-vertex-anchored class
// table with multiplicity thinning.
class WindowFamily : public FamilyModel {
public:
    WindowFamily(int L_max, Box sim_box, double beta);

    double total_rate() const override { return total_rate_; }
    std::shared_ptr<const RootTables> build_root_tables(const RootQuery&) const override;
    BasisRef sample_root(const RootTables&, Rng&) const override;
    double neighbor_rate_bound(const BasisRef&, std::span<const Pt>) const override;
    bool sample_neighbor(const BasisRef&, std::span<const Pt>, Rng&, BasisRef&) const override;
    double rate(const BasisRef& b) const override { return shape_rate_[b.shape]; }
    void vertices(const BasisRef&, std::vector<Pt>& out) const override;
    bool touches_boxes(const BasisRef&, std::span<const Box>) const override;
    Contour materialize(const BasisRef&) const override;
    BasisRef resolve(const Contour&) const override;

    int L_max() const { return L_max_; }
    const Box& sim_box() const { return sim_box_; }
    const ShapeTable& shapes() const { return table_; }
    bool is_member(const BasisRef&) const;

    // Exact number of translates of every class touching the region;
    // exposed for analytic reference means (sums of rates over the family).
    double rate_sum_over_region(std::span<const Box> region, int min_length) const;
    // counts[n] = number of family contours of length n touching the region.
    std::vector<int64_t> placement_count_by_length(std::span<const Box> region) const;

private:
    int L_max_ = 0;
    Box sim_box_;
    const ShapeTable& table_;
    std::vector<double> shape_rate_;
    double total_rate_ = 0;

    // dual-vertex-anchored candidate table: entries (shape, vertex index)
    std::vector<std::pair<int32_t, int32_t>> anchor_entries_;
    std::vector<double> anchor_cum_;
    double alpha_vert_ = 0;

    std::unordered_map<Contour, int32_t, Contour::Hash> shape_index_;

    struct Tables;
    BasisRef make_ref(int32_t shape, Pt offset) const;
};

}  // namespace cgas
