#pragma once

#include "coopstab/phy.hpp"

#include <array>

namespace fixtures {

// Success probabilities, order p_pd, p_s, p_sd, s_sd, s_pd, sd_pd.
inline coopstab::LinkProbabilities weak_table() {
    return coopstab::LinkProbabilities({0.0, 0.7, 0.7, 0.9, 0.8, 0.8}, {0.32, 0.32});
}

inline coopstab::LinkProbabilities strong_table() {
    return coopstab::LinkProbabilities({0.0, 0.7, 0.7, 0.9, 0.8, 0.8}, {0.8, 0.8});
}

// Primary direct link usable, used where the special cases need Pbar_{p,pd} > 0.
inline coopstab::LinkProbabilities mixed_table() {
    return coopstab::LinkProbabilities({0.5, 0.7, 0.6, 0.85, 0.8, 0.75}, {0.4, 0.35});
}

inline std::array<double, 6> success_of(const coopstab::LinkProbabilities& l) {
    std::array<double, 6> s{};
    for (coopstab::Link k : coopstab::kAllLinks) s[static_cast<int>(k)] = l.success(k);
    return s;
}

} // namespace fixtures
