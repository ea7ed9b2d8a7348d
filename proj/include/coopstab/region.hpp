#pragma once

#include "coopstab/policy.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace coopstab {

enum class Variant { ra, dominant1, dominant2, tdma, priority, nonpriority, strong_mpr, no_coop };
std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name); // throws ConfigError

// Which envelope a curve traces. Closed-form variants use exact.
enum class BoundKind { inner_S1, inner_S2, inner_union, outer_O1, outer_O2, outer_intersection, exact };
std::string_view to_string(BoundKind b);
BoundKind parse_bound(std::string_view name); // throws ConfigError

// Parameters attaining a region point; fields a variant does not use stay empty.
struct PolicyPoint {
    std::optional<double> f_s;
    std::optional<double> f_sd;
    std::optional<KeepPriority> keep;
    std::optional<double> alpha_s;
    std::optional<double> alpha_sp;
    std::optional<double> alpha_sd;
    std::optional<double> omega;
    std::optional<double> alpha;
};

struct RegionPoint {
    double lambda_p = 0.0;
    double lambda_s_max = 0.0;
    bool feasible = false;
    PolicyPoint argmax;
};

struct RegionCurve {
    Variant variant = Variant::ra;
    BoundKind bound = BoundKind::exact;
    std::vector<RegionPoint> points;
};

// lo, lo + step, ... up to hi; hi itself is included when it lands on the
// grid within 1e-9. Values are computed as lo + i*step.
std::vector<double> lambda_grid(double lo, double hi, double step);

// Largest increase between consecutive points; <= 0 for a non-increasing curve.
double max_increase(const RegionCurve& curve);

// Pointwise max / min of two curves on the same grid. The argmax of the
// winning curve is kept.
RegionCurve pointwise_max(const RegionCurve& a, const RegionCurve& b, Variant v, BoundKind k);
RegionCurve pointwise_min(const RegionCurve& a, const RegionCurve& b, Variant v, BoundKind k);

} // namespace coopstab
