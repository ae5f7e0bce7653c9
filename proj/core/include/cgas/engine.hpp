#pragma once

#include <memory>

#include "cgas/family.hpp"

namespace cgas {

// Guards for the backward construction. The sampler refuses to run unless
// the family's beta sits strictly above the certified beta* bracket upper
// end (computed at gate_L_max), which rules out backward percolation for the
// full model and a fortiori for any truncated sub-family.
struct ProcessParams {
    size_t max_cylinders = 1'000'000;
    size_t max_depth = 10'000;
    int gate_L_max = 16;
    bool check_beta_gate = true;
};

double certified_beta_gate(int gate_L_max);

// Backward perfect sampler bound to one family and one root query. Holds the
// precomputed root tables and reusable workspaces; use one instance per
// thread. (seed, query, family) fully determines every output.
class ClanSampler {
public:
    ClanSampler(std::shared_ptr<const FamilyModel> fam, RootQuery query, ProcessParams params);
    ~ClanSampler();
    ClanSampler(ClanSampler&&) noexcept;

    // The clan of ancestors of all cylinders alive at time t whose basis
    // matches the query, classified. Exact for the family's model.
    Clan grow_clan(Rng& rng, double t = 0.0);

    // Bases of the kept roots at time zero: one perfect sample of the
    // stationary loss network restricted to the query. Pairwise compatible.
    std::vector<BasisRef> sample_eta_zero(Rng& rng);

    // Stationary free-network occupation counts over the query (sparse:
    // contours with count zero are omitted). Marginals are Poisson(e^{-b|g|}).
    std::vector<std::pair<BasisRef, int32_t>> sample_free_network(Rng& rng);

    double root_rate() const { return tables_->rate; }
    const FamilyModel& family() const { return *fam_; }
    const ProcessParams& params() const { return params_; }
    const RootQuery& query() const { return query_; }

private:
    struct Ws;
    void grow_into_ws(Rng& rng);
    bool root_covered(const BasisRef&) const;

    std::shared_ptr<const FamilyModel> fam_;
    RootQuery query_;
    ProcessParams params_;
    std::shared_ptr<const FamilyModel::RootTables> tables_;
    std::unordered_map<uint64_t, char> root_keys_;  // basis_set coverage
    std::unique_ptr<Ws> ws_;
};

// Continuous-time loss-network dynamics: every family contour attempts birth
// at rate e^{-beta|gamma|}, accepted iff the configuration stays compatible;
// present contours die at rate 1.
struct ForwardResult {
    double duration = 0;
    std::vector<std::pair<uint64_t, double>> probe_occupation;  // key -> time fraction
    std::vector<BasisRef> final_config;
    int64_t births_attempted = 0;
    int64_t births_accepted = 0;
    int64_t deaths = 0;
};

ForwardResult forward_dynamics(const FamilyModel& fam, std::span<const BasisRef> initial,
                               double duration, std::span<const BasisRef> probes, Rng& rng);

// Coupling of the clans of two disjoint regions: an independent pair
// (hat_a, hat_b) from separate streams, and a marginally-consistent pair
// (clan_a, clan_b). When the independent clans are compatible the pairs
// coincide; otherwise clan_a/clan_b are carved out of one jointly grown
// clan of the union region, so their union is exactly the union-region clan.
struct CoupledClans {
    Clan clan_a, clan_b;
    Clan hat_a, hat_b;
    bool incompatible = false;  // the hats clash (the coupling-failure flag)
};

class CoupledSampler {
public:
    CoupledSampler(std::shared_ptr<const FamilyModel> fam, Box region_a, Box region_b,
                   ProcessParams params);
    CoupledClans run(uint64_t seed);

private:
    Box a_, b_;
    ClanSampler sa_, sb_, sab_;
    std::shared_ptr<const FamilyModel> fam_;
};

bool clans_incompatible(const Clan& a, const Clan& b, const FamilyModel& fam);

// Ancestor closure of the roots whose basis touches `region`, re-indexed as
// a standalone clan.
Clan subclan_for_region(const Clan& joint, Box region, const FamilyModel& fam);

}  // namespace cgas
