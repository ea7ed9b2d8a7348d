#include "coopstab/region.hpp"

#include "coopstab/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

namespace coopstab {

namespace {

constexpr std::array<std::pair<Variant, std::string_view>, 8> kVariantNames = {{
    {Variant::ra, "ra"},
    {Variant::dominant1, "dominant1"},
    {Variant::dominant2, "dominant2"},
    {Variant::tdma, "tdma"},
    {Variant::priority, "priority"},
    {Variant::nonpriority, "nonpriority"},
    {Variant::strong_mpr, "strong_mpr"},
    {Variant::no_coop, "no_coop"},
}};

constexpr std::array<std::pair<BoundKind, std::string_view>, 7> kBoundNames = {{
    {BoundKind::inner_S1, "inner_S1"},
    {BoundKind::inner_S2, "inner_S2"},
    {BoundKind::inner_union, "inner_union"},
    {BoundKind::outer_O1, "outer_O1"},
    {BoundKind::outer_O2, "outer_O2"},
    {BoundKind::outer_intersection, "outer_intersection"},
    {BoundKind::exact, "exact"},
}};

template <class Pick>
RegionCurve combine(const RegionCurve& a, const RegionCurve& b, Variant v, BoundKind k, Pick pick_a) {
    if (a.points.size() != b.points.size()) throw InvalidParameter("curves are on different grids");
    RegionCurve out{v, k, {}};
    out.points.reserve(a.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        const RegionPoint& pa = a.points[i];
        const RegionPoint& pb = b.points[i];
        if (std::abs(pa.lambda_p - pb.lambda_p) > 1e-12) {
            throw InvalidParameter("curves are on different grids");
        }
        out.points.push_back(pick_a(pa, pb) ? pa : pb);
    }
    return out;
}

} // namespace

std::string_view to_string(Variant v) {
    for (const auto& [value, name] : kVariantNames) {
        if (value == v) return name;
    }
    return "?";
}

Variant parse_variant(std::string_view name) {
    for (const auto& [value, n] : kVariantNames) {
        if (n == name) return value;
    }
    throw ConfigError("unknown variant '" + std::string(name) + "'");
}

std::string_view to_string(BoundKind b) {
    for (const auto& [value, name] : kBoundNames) {
        if (value == b) return name;
    }
    return "?";
}

BoundKind parse_bound(std::string_view name) {
    for (const auto& [value, n] : kBoundNames) {
        if (n == name) return value;
    }
    throw ConfigError("unknown bound kind '" + std::string(name) + "'");
}

std::vector<double> lambda_grid(double lo, double hi, double step) {
    if (!(step > 0.0)) throw InvalidParameter("grid step must be positive");
    if (!(lo <= hi)) throw InvalidParameter("grid start exceeds grid end");
    std::vector<double> grid;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) grid.push_back(std::min(lo + i * step, hi));
    return grid;
}

double max_increase(const RegionCurve& curve) {
    double worst = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        worst = std::max(worst, curve.points[i].lambda_s_max - curve.points[i - 1].lambda_s_max);
    }
    return worst;
}

RegionCurve pointwise_max(const RegionCurve& a, const RegionCurve& b, Variant v, BoundKind k) {
    return combine(a, b, v, k, [](const RegionPoint& pa, const RegionPoint& pb) {
        if (pa.feasible != pb.feasible) return pa.feasible;
        return pa.lambda_s_max >= pb.lambda_s_max;
    });
}

RegionCurve pointwise_min(const RegionCurve& a, const RegionCurve& b, Variant v, BoundKind k) {
    return combine(a, b, v, k, [](const RegionPoint& pa, const RegionPoint& pb) {
        if (pa.feasible != pb.feasible) return !pa.feasible;
        return pa.lambda_s_max <= pb.lambda_s_max;
    });
}

} // namespace coopstab
