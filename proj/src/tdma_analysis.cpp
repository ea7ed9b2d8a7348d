#include "coopstab/tdma_analysis.hpp"

#include "coopstab/error.hpp"
#include "coopstab/queueing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace coopstab {

namespace {

struct Shares {
    double idle = 0.0;
    double relay_ps = 0.0;
    double relay_sd = 0.0;
    bool ok = false;
};

// Idle fraction and the two relaying shares; ok == false when a relaying
// queue has traffic but no way to be served.
Shares relay_shares(const LinkProbabilities& link, double lambda_p, const Admission& a) {
    Shares s;
    const PrimaryService ps = primary_service_rate(link, a.f_s, a.f_sd);
    if (!(lambda_p < ps.mu_p) && lambda_p > 0.0) return s;
    s.idle = 1.0 - busy_probability(lambda_p, ps.mu_p);
    const RelayArrivals r = relaying_arrival_rates(link, lambda_p, ps.mu_p, a);
    auto share = [&](double arrival, double success, bool& ok) {
        if (arrival <= 0.0) return 0.0;
        const double cap = s.idle * success;
        if (cap <= 0.0) {
            ok = false;
            return 0.0;
        }
        return arrival / cap;
    };
    s.ok = true;
    s.relay_ps = share(r.lambda_ps, link.success(Link::s_pd), s.ok);
    s.relay_sd = share(r.lambda_sd, link.success(Link::sd_pd), s.ok);
    return s;
}

void require_lambda(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidParameter(std::string(name) + " must lie in [0,1], got " + std::to_string(v));
    }
}

} // namespace

RaRates tdma_rates(const LinkProbabilities& link, double lambda_p, const TdmaPolicy& policy) {
    require_lambda(lambda_p, "lambda_p");
    policy.validate();
    const PrimaryService ps = primary_service_rate(link, policy.admission.f_s, policy.admission.f_sd);
    const RelayArrivals arr = relaying_arrival_rates(link, lambda_p, ps.mu_p, policy.admission);
    const double idle = 1.0 - busy_probability(lambda_p, ps.mu_p);
    RaRates r;
    r.mu_p = ps.mu_p;
    r.cooperation_gain = ps.cooperation_gain;
    r.lambda_ps = arr.lambda_ps;
    r.lambda_sd = arr.lambda_sd;
    r.mu_sd = idle * (1.0 - policy.omega) * link.success(Link::sd_pd);
    r.mu_s = idle * policy.omega * policy.alpha * link.success(Link::s_sd);
    r.mu_ps = idle * policy.omega * (1.0 - policy.alpha) * link.success(Link::s_pd);
    return r;
}

TdmaSplit tdma_optimal_split(const LinkProbabilities& link, double lambda_p, double lambda_s,
                             const Admission& admission) {
    require_lambda(lambda_p, "lambda_p");
    require_lambda(lambda_s, "lambda_s");
    admission.validate();
    TdmaSplit out;
    const Shares s = relay_shares(link, lambda_p, admission);
    if (!s.ok) return out;
    out.relay_ps = s.relay_ps;
    out.relay_sd = s.relay_sd;
    const double own_cap = s.idle * link.success(Link::s_sd);
    if (lambda_s > 0.0) {
        if (own_cap <= 0.0) return out;
        out.own = lambda_s / own_cap;
    }
    out.omega = std::clamp(1.0 - out.relay_sd, 0.0, 1.0);
    out.alpha = out.omega > 0.0 ? std::clamp(out.own / out.omega, 0.0, 1.0) : 0.0;
    out.feasible = out.total() <= 1.0;
    return out;
}

BoundValue tdma_region_boundary(const LinkProbabilities& link, double lambda_p,
                                const Admission& admission) {
    require_lambda(lambda_p, "lambda_p");
    admission.validate();
    const Shares s = relay_shares(link, lambda_p, admission);
    if (!s.ok) return {0.0, false};
    const double left = 1.0 - s.relay_sd - s.relay_ps;
    return {std::max(0.0, s.idle * link.success(Link::s_sd) * left), left >= 0.0};
}

TdmaOptimum tdma_max_secondary(const LinkProbabilities& link, double lambda_p,
                               const GridConfig& config) {
    require_lambda(lambda_p, "lambda_p");
    const std::array<double, 2> lo{0.0, 0.0}, hi{1.0, 1.0};
    TdmaOptimum best;
    for (KeepPriority keep : {KeepPriority::receiver, KeepPriority::transmitter}) {
        const GridResult g = grid_refine(
            [&](std::span<const double> x) {
                const BoundValue b = tdma_region_boundary(link, lambda_p, {x[0], x[1], keep});
                return b.feasible ? b.value : -std::numeric_limits<double>::infinity();
            },
            lo, hi, config);
        if (g.found && (!best.feasible || g.value > best.value)) {
            best.feasible = true;
            best.value = g.value;
            best.policy.admission = {g.point[0], g.point[1], keep};
        }
    }
    if (best.feasible) {
        const TdmaSplit split = tdma_optimal_split(link, lambda_p, best.value, best.policy.admission);
        best.policy.omega = split.omega;
        best.policy.alpha = split.alpha;
    }
    return best;
}

TdmaOptimum tdma_max_primary(const LinkProbabilities& link, double lambda_p,
                             const GridConfig& config) {
    require_lambda(lambda_p, "lambda_p");
    const std::array<double, 2> lo{0.0, 0.0}, hi{1.0, 1.0};
    TdmaOptimum best;
    for (KeepPriority keep : {KeepPriority::receiver, KeepPriority::transmitter}) {
        const GridResult g = grid_refine(
            [&](std::span<const double> x) {
                const Admission a{x[0], x[1], keep};
                const double mu_p = primary_service_rate(link, a.f_s, a.f_sd).mu_p;
                if (a.f_s == 0.0 && a.f_sd == 0.0) return mu_p;
                const Shares s = relay_shares(link, lambda_p, a);
                if (!s.ok || s.relay_ps + s.relay_sd > 1.0) {
                    return -std::numeric_limits<double>::infinity();
                }
                return mu_p;
            },
            lo, hi, config);
        if (g.found && (!best.feasible || g.value > best.value)) {
            best.feasible = true;
            best.value = g.value;
            best.policy.admission = {g.point[0], g.point[1], keep};
        }
    }
    if (best.feasible) {
        const TdmaSplit split = tdma_optimal_split(link, lambda_p, 0.0, best.policy.admission);
        best.policy.omega = split.omega;
        best.policy.alpha = split.alpha;
    }
    return best;
}

RegionCurve tdma_curve(const LinkProbabilities& link, std::span<const double> grid,
                       const GridConfig& config) {
    RegionCurve c{Variant::tdma, BoundKind::exact, std::vector<RegionPoint>(grid.size())};
    std::optional<Admission> prev;
    for (std::size_t k = grid.size(); k-- > 0;) {
        const double lp = grid[k];
        TdmaOptimum o = tdma_max_secondary(link, lp, config);
        // The previous argmax stays feasible at smaller lambda_p.
        if (prev) {
            const BoundValue b = tdma_region_boundary(link, lp, *prev);
            if (b.feasible && (!o.feasible || b.value > o.value)) {
                o.feasible = true;
                o.value = b.value;
                o.policy.admission = *prev;
                const TdmaSplit split = tdma_optimal_split(link, lp, b.value, *prev);
                o.policy.omega = split.omega;
                o.policy.alpha = split.alpha;
            }
        }
        RegionPoint pt{lp, o.feasible ? o.value : 0.0, o.feasible, {}};
        if (o.feasible) {
            prev = o.policy.admission;
            pt.argmax.f_s = o.policy.admission.f_s;
            pt.argmax.f_sd = o.policy.admission.f_sd;
            pt.argmax.keep = o.policy.admission.keep;
            pt.argmax.omega = o.policy.omega;
            pt.argmax.alpha = o.policy.alpha;
        }
        c.points[k] = pt;
    }
    return c;
}

} // namespace coopstab
