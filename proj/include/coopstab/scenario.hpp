#pragma once

#include "coopstab/optimizer.hpp"
#include "coopstab/phy.hpp"
#include "coopstab/region.hpp"
#include "coopstab/simulator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace coopstab {

// Policy keys as written in the scenario; which ones may appear depends on
// the variant.
struct PolicyFields {
    std::optional<double> f_s;
    std::optional<double> f_sd;
    std::optional<KeepPriority> keep;
    std::optional<double> alpha_s;
    std::optional<double> alpha_sp;
    std::optional<double> alpha_sd;
    std::optional<double> omega;
    std::optional<double> alpha;
};

struct Range {
    double start = 0.0;
    std::optional<double> stop; // lambda sweep: defaults to the cooperative limit
    double step = 0.01;
};

struct SimSettings {
    std::uint64_t horizon = 1'000'000;
    std::uint64_t warmup = 100'000;
    int replicas = 8;
    std::uint64_t seed = 20130611;
};

struct Scenario {
    std::optional<LinkProbabilities> table; // explicit outage table
    std::optional<PhyParams> phy;          // or physical parameters
    Variant variant = Variant::ra;
    std::vector<Variant> region_variants;
    std::vector<BoundKind> bounds;
    double lambda_p = 0.0;
    double lambda_s = 0.0;
    PolicyFields policy;
    Range lambda_sweep;
    std::optional<Range> rate_sweep;
    SimSettings sim;
    OptConfig optimizer;
    GridConfig grid;

    LinkProbabilities links() const;
    // Throws ConfigError when the policy keys do not fit the variant.
    PolicyVariant policy_for(Variant v) const;
    std::vector<double> lambda_grid() const;
};

// Unknown keys anywhere are errors; messages name the offending field.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

} // namespace coopstab
