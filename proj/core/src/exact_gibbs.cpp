#include "cgas/exact_gibbs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "cgas/errors.hpp"

namespace cgas {

double GibbsDistribution::config_probability(uint64_t mask) const {
    auto it = std::lower_bound(configs.begin(), configs.end(), mask,
                               [](const auto& a, uint64_t m) { return a.first < m; });
    if (it == configs.end() || it->first != mask) return 0.0;
    return it->second;
}

GibbsDistribution exact_gibbs_small(const ContourFamily& family, double beta,
                                    size_t max_states) {
    const size_t k = family.members.size();
    if (k > 63) throw invalid_parameter("exact_gibbs_small: at most 63 contours");

    std::vector<uint64_t> incompat(k, 0);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j)
            if (!compatible(family.members[i], family.members[j]))
                incompat[i] |= uint64_t(1) << j;

    std::vector<double> weight(k);
    for (size_t i = 0; i < k; ++i) weight[i] = std::exp(-beta * family.members[i].length());

    GibbsDistribution out;
    out.beta = beta;
    out.num_members = k;
    out.marginals.assign(k, 0.0);
    out.pair_marginals.assign(k, std::vector<double>(k, 0.0));

    // DFS over members in index order; `blocked` collects everything
    // incompatible with the current inclusion set.
    struct Frame {
        size_t next;
        uint64_t mask;
        uint64_t blocked;
        double w;
    };
    std::vector<Frame> stack{{0, 0, 0, 1.0}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        for (size_t i = f.next; i < k; ++i) {
            if (f.blocked & (uint64_t(1) << i)) continue;
            // branch: include member i (exclusion is the continued loop)
            stack.push_back({i + 1, f.mask | (uint64_t(1) << i), f.blocked | incompat[i],
                             f.w * weight[i]});
        }
        if (out.configs.size() >= max_states)
            throw capacity_error("exact_gibbs_small: compatible-configuration guard exceeded");
        out.configs.push_back({f.mask, f.w});
        out.Z += f.w;
        for (uint64_t mi = f.mask; mi; mi &= mi - 1) {
            size_t i = size_t(std::countr_zero(mi));
            out.marginals[i] += f.w;
            for (uint64_t mj = f.mask; mj; mj &= mj - 1)
                out.pair_marginals[i][std::countr_zero(mj)] += f.w;
        }
    }

    for (auto& [mask, w] : out.configs) w /= out.Z;
    for (double& m : out.marginals) m /= out.Z;
    for (auto& row : out.pair_marginals)
        for (double& v : row) v /= out.Z;
    std::sort(out.configs.begin(), out.configs.end());
    return out;
}

}  // namespace cgas
