#pragma once

#include <cstdint>
#include <vector>

#include "cgas/enumerate.hpp"

namespace cgas {

// Exact finite-volume Gibbs distribution over the pairwise-compatible
// subsets of a small explicit family: P(config) proportional to
// exp(-beta * sum of member lengths). Members are indexed by their position
// in the family; configurations are bitmasks over those indices.
struct GibbsDistribution {
    double beta = 0;
    double Z = 0;
    size_t num_members = 0;
    std::vector<std::pair<uint64_t, double>> configs;  // (mask, probability)
    std::vector<double> marginals;                     // p_gamma
    std::vector<std::vector<double>> pair_marginals;   // p_{gamma theta}

    double config_probability(uint64_t mask) const;  // 0 for incompatible masks
};

// Enumerates every compatible configuration. Throws invalid_parameter for
// families over 63 members and capacity_error past the state guard.
GibbsDistribution exact_gibbs_small(const ContourFamily& family, double beta,
                                    size_t max_states = size_t(1) << 25);

}  // namespace cgas
