#include "coopstab/ra_analysis.hpp"

#include "coopstab/error.hpp"
#include "coopstab/queueing.hpp"
#include "coopstab/special_cases.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace coopstab {

namespace {

RelayArrivals arrivals_for_busy(const LinkProbabilities& link, double busy, const Admission& a) {
    const double miss = link.outage(Link::p_pd);
    const double hs = a.f_s * link.success(Link::p_s);
    const double hsd = a.f_sd * link.success(Link::p_sd);
    if (a.keep == KeepPriority::receiver) {
        return {busy * miss * (1.0 - hsd) * hs, busy * miss * hsd};
    }
    return {busy * miss * hs, busy * miss * (1.0 - hs) * hsd};
}

struct Common {
    PrimaryService primary;
    RelayArrivals arrivals;
    double idle = 0.0; // 1 - lambda_p/mu_p, clamped
};

Common common_terms(const LinkProbabilities& link, double lambda_p, const Admission& a) {
    Common c;
    c.primary = primary_service_rate(link, a.f_s, a.f_sd);
    const double busy = busy_probability(lambda_p, c.primary.mu_p);
    c.idle = 1.0 - busy;
    c.arrivals = arrivals_for_busy(link, busy, a);
    return c;
}

RaRates assemble(const Common& c) {
    RaRates r;
    r.mu_p = c.primary.mu_p;
    r.cooperation_gain = c.primary.cooperation_gain;
    r.lambda_ps = c.arrivals.lambda_ps;
    r.lambda_sd = c.arrivals.lambda_sd;
    return r;
}

void require_rate_defined(double arrival, double service, const char* queue) {
    if (service <= 0.0 && arrival > 0.0) {
        throw InfeasibleRate(std::string("service rate of ") + queue +
                             " is zero while its arrival rate is positive");
    }
}

RaRates dominant1(const LinkProbabilities& link, double lambda_p, const RaPolicy& p, bool strict) {
    const Common c = common_terms(link, lambda_p, p.admission);
    RaRates r = assemble(c);
    const double a_sd = p.alpha_sd;
    r.mu_s = c.idle * link.success(Link::s_sd) * p.alpha_s * (1.0 - a_sd);
    r.mu_ps = c.idle * p.alpha_sp *
              ((1.0 - a_sd) * link.success(Link::s_pd) +
               a_sd * link.interfered_success(InterferedLink::s_pd_under_sd));
    if (strict) require_rate_defined(r.lambda_ps, r.mu_ps, "Q_ps");
    const double rho = busy_probability(r.lambda_ps, r.mu_ps);
    const double alone = (1.0 - p.alpha_s) * (1.0 - rho) + p.alpha_idle() * rho;
    const double together = p.alpha_sp * rho + p.alpha_s;
    r.mu_sd = c.idle * a_sd *
              (alone * link.success(Link::sd_pd) +
               together * link.interfered_success(InterferedLink::sd_pd_under_s));
    return r;
}

RaRates dominant2(const LinkProbabilities& link, double lambda_p, const RaPolicy& p, bool strict) {
    const Common c = common_terms(link, lambda_p, p.admission);
    RaRates r = assemble(c);
    r.mu_sd = c.idle * p.alpha_sd *
              (p.alpha_idle() * link.success(Link::sd_pd) +
               (p.alpha_sp + p.alpha_s) * link.interfered_success(InterferedLink::sd_pd_under_s));
    if (strict) require_rate_defined(r.lambda_sd, r.mu_sd, "Q_sd");
    const double sr_on = p.alpha_sd * busy_probability(r.lambda_sd, r.mu_sd);
    r.mu_s = c.idle * link.success(Link::s_sd) * p.alpha_s * (1.0 - sr_on);
    r.mu_ps = c.idle * p.alpha_sp *
              ((1.0 - sr_on) * link.success(Link::s_pd) +
               sr_on * link.interfered_success(InterferedLink::s_pd_under_sd));
    return r;
}

RaRates outer1(const LinkProbabilities& link, double lambda_p, const RaPolicy& p, bool strict) {
    const Common c = common_terms(link, lambda_p, p.admission);
    RaRates r = assemble(c);
    r.mu_s = c.idle * link.success(Link::s_sd) * p.alpha_s;
    r.mu_ps = c.idle * p.alpha_sp * link.success(Link::s_pd);
    if (strict) require_rate_defined(r.lambda_ps, r.mu_ps, "Q_ps");
    const double rho = busy_probability(r.lambda_ps, r.mu_ps);
    const double alone = (1.0 - rho) + (1.0 - p.alpha_sp) * rho + (1.0 - p.alpha_s) * (1.0 - rho) +
                         p.alpha_idle() * rho;
    const double together = p.alpha_sp * rho + p.alpha_s;
    r.mu_sd = std::min(1.0, c.idle * p.alpha_sd *
                                (alone * link.success(Link::sd_pd) +
                                 together * link.interfered_success(InterferedLink::sd_pd_under_s)));
    return r;
}

void require_lambda(double lambda_p) {
    if (!(lambda_p >= 0.0 && lambda_p <= 1.0)) {
        throw InvalidParameter("lambda_p must lie in [0,1], got " + std::to_string(lambda_p));
    }
}

std::vector<double> to_vector(const RaPolicy& p) {
    return {p.alpha_s, p.alpha_sp, p.alpha_sd, p.admission.f_s, p.admission.f_sd};
}

RaPolicy from_vector(std::span<const double> x, KeepPriority keep) {
    RaPolicy p;
    p.alpha_s = x[0];
    p.alpha_sp = x[1];
    p.alpha_sd = x[2];
    p.admission = {x[3], x[4], keep};
    return p;
}

RegionPoint to_point(double lambda_p, const RaOptimum& opt) {
    RegionPoint pt;
    pt.lambda_p = lambda_p;
    pt.feasible = opt.feasible;
    pt.lambda_s_max = opt.feasible ? std::max(0.0, opt.value) : 0.0;
    if (opt.feasible) pt.argmax = to_policy_point(opt.policy);
    return pt;
}

// Policy reaching the f_sd = 0 optimum; it is feasible in every RA system
// whenever the special case is.
std::optional<RaPolicy> special_case_seed(const LinkProbabilities& link, double lambda_p) {
    const NonPriorityOptimum np = nonpriority_optimal(link, lambda_p);
    if (!np.feasible) return std::nullopt;
    RaPolicy p;
    p.alpha_s = np.alpha_s;
    p.alpha_sp = np.alpha_sp;
    p.alpha_sd = 0.0;
    p.admission = {np.f_s, 0.0, KeepPriority::receiver};
    return p;
}

} // namespace

PrimaryService primary_service_rate(const LinkProbabilities& link, double f_s, double f_sd) {
    Admission{f_s, f_sd, KeepPriority::receiver}.validate();
    const double hs = f_s * link.success(Link::p_s);
    const double hsd = f_sd * link.success(Link::p_sd);
    const double gain = link.outage(Link::p_pd) * (hsd + hs - hs * hsd);
    return {link.success(Link::p_pd) + gain, gain};
}

RelayArrivals relaying_arrival_rates(const LinkProbabilities& link, double lambda_p, double mu_p,
                                     const Admission& admission) {
    require_lambda(lambda_p);
    admission.validate();
    if (mu_p <= 0.0 && lambda_p > 0.0) {
        throw InfeasibleRate("primary service rate is zero while lambda_p is positive");
    }
    return arrivals_for_busy(link, busy_probability(lambda_p, mu_p), admission);
}

RaRates dominant1_rates(const LinkProbabilities& link, double lambda_p, const RaPolicy& policy) {
    require_lambda(lambda_p);
    policy.validate();
    return dominant1(link, lambda_p, policy, true);
}

RaRates dominant2_rates(const LinkProbabilities& link, double lambda_p, const RaPolicy& policy) {
    require_lambda(lambda_p);
    policy.validate();
    return dominant2(link, lambda_p, policy, true);
}

RaRates outer1_rates(const LinkProbabilities& link, double lambda_p, const RaPolicy& policy) {
    require_lambda(lambda_p);
    policy.validate();
    return outer1(link, lambda_p, policy, true);
}

BoundValue outer2_max_secondary(const LinkProbabilities& link, double lambda_p) {
    require_lambda(lambda_p);
    const double mu_max = link.max_primary_service();
    if (lambda_p > mu_max) return {0.0, false};
    if (mu_max <= 0.0) return {link.success(Link::s_sd), true};
    return {std::max(0.0, (1.0 - lambda_p / mu_max) * link.success(Link::s_sd)), true};
}

StrongMprRates strong_mpr_rates(const LinkProbabilities& link, double lambda_p,
                                const Admission& admission) {
    require_lambda(lambda_p);
    admission.validate();
    const Common c = common_terms(link, lambda_p, admission);
    StrongMprRates out;
    out.rates = assemble(c);
    out.rates.mu_s = c.idle * link.success(Link::s_sd);
    out.rates.mu_sd = c.idle * link.success(Link::sd_pd);
    out.rates.mu_ps = c.idle * link.success(Link::s_pd);
    out.ps_feasible = out.rates.lambda_ps <= out.rates.mu_ps;
    out.sd_feasible = out.rates.lambda_sd <= out.rates.mu_sd;
    out.table_is_strong = link.is_strong_mpr(1e-9);
    return out;
}

RaRates ra_rates(RaSystem system, const LinkProbabilities& link, double lambda_p,
                 const RaPolicy& policy) {
    switch (system) {
    case RaSystem::dominant1: return dominant1(link, lambda_p, policy, false);
    case RaSystem::dominant2: return dominant2(link, lambda_p, policy, false);
    case RaSystem::outer1: return outer1(link, lambda_p, policy, false);
    }
    throw InvalidParameter("unknown RA system");
}

double ra_violation(const RaRates& r, double lambda_p, const RaPolicy& policy) {
    auto pos = [](double v) { return v > 0.0 ? v : 0.0; };
    return pos(lambda_p - r.mu_p) + pos(r.lambda_ps - r.mu_ps) + pos(r.lambda_sd - r.mu_sd) +
           pos(policy.alpha_s + policy.alpha_sp - 1.0);
}

RaOptimum optimize_ra(RaSystem system, const LinkProbabilities& link, double lambda_p,
                      const OptConfig& config, std::span<const RaPolicy> warm_starts,
                      RaObjective objective) {
    require_lambda(lambda_p);
    RaOptimum best;
    for (KeepPriority keep : {KeepPriority::receiver, KeepPriority::transmitter}) {
        OptProblem problem;
        problem.lower.assign(5, 0.0);
        problem.upper.assign(5, 1.0);
        problem.evaluate = [&, keep](std::span<const double> x) {
            const RaPolicy p = from_vector(x, keep);
            const RaRates r = ra_rates(system, link, lambda_p, p);
            if (objective == RaObjective::primary_service) {
                // Any mu_p is admissible; only the relaying queues must be stable.
                return Evaluation{r.mu_p, ra_violation(r, 0.0, p)};
            }
            return Evaluation{r.mu_s, ra_violation(r, lambda_p, p)};
        };
        problem.repair = [](std::span<double> x) {
            const double sum = x[0] + x[1];
            if (sum > 1.0) {
                x[0] /= sum;
                x[1] /= sum;
            }
        };
        for (const RaPolicy& w : warm_starts) problem.warm_starts.push_back(to_vector(w));
        const OptResult res = multistart_solve(problem, config);
        if (res.feasible && (!best.feasible || res.value > best.value)) {
            best.feasible = true;
            best.value = res.value;
            best.policy = from_vector(res.argmax, keep);
        }
    }
    return best;
}

InnerBoundCurves inner_bound_curve(const LinkProbabilities& link, std::span<const double> grid,
                                   const OptConfig& config) {
    InnerBoundCurves out;
    out.s1 = {Variant::ra, BoundKind::inner_S1, std::vector<RegionPoint>(grid.size())};
    out.s2 = {Variant::ra, BoundKind::inner_S2, std::vector<RegionPoint>(grid.size())};
    std::optional<RaPolicy> prev1, prev2;
    // Descending sweep: the previous argmax stays feasible at smaller lambda_p.
    for (std::size_t k = grid.size(); k-- > 0;) {
        const double lp = grid[k];
        std::vector<RaPolicy> seeds;
        if (auto s = special_case_seed(link, lp)) seeds.push_back(*s);
        std::vector<RaPolicy> seeds1 = seeds, seeds2 = seeds;
        if (prev1) seeds1.push_back(*prev1);
        if (prev2) seeds2.push_back(*prev2);
        const RaOptimum o1 = optimize_ra(RaSystem::dominant1, link, lp, config, seeds1);
        const RaOptimum o2 = optimize_ra(RaSystem::dominant2, link, lp, config, seeds2);
        if (o1.feasible) prev1 = o1.policy;
        if (o2.feasible) prev2 = o2.policy;
        out.s1.points[k] = to_point(lp, o1);
        out.s2.points[k] = to_point(lp, o2);
    }
    out.combined = pointwise_max(out.s1, out.s2, Variant::ra, BoundKind::inner_union);
    return out;
}

OuterBoundCurves outer_bound_curve(const LinkProbabilities& link, std::span<const double> grid,
                                   const OptConfig& config, const InnerBoundCurves* inner) {
    if (inner && (inner->s1.points.size() != grid.size() ||
                  inner->s2.points.size() != grid.size())) {
        throw InvalidParameter("inner curves are on a different grid");
    }
    OuterBoundCurves out;
    out.o1 = {Variant::ra, BoundKind::outer_O1, std::vector<RegionPoint>(grid.size())};
    out.o2 = {Variant::ra, BoundKind::outer_O2, std::vector<RegionPoint>(grid.size())};
    std::optional<RaPolicy> prev;
    auto seed_from = [](const RegionPoint& pt) -> std::optional<RaPolicy> {
        if (!pt.feasible) return std::nullopt;
        const PolicyPoint& a = pt.argmax;
        RaPolicy p;
        p.alpha_s = a.alpha_s.value_or(0.0);
        p.alpha_sp = a.alpha_sp.value_or(0.0);
        p.alpha_sd = a.alpha_sd.value_or(0.0);
        p.admission = {a.f_s.value_or(0.0), a.f_sd.value_or(0.0),
                       a.keep.value_or(KeepPriority::receiver)};
        return p;
    };
    for (std::size_t k = grid.size(); k-- > 0;) {
        const double lp = grid[k];
        std::vector<RaPolicy> seeds;
        if (auto s = special_case_seed(link, lp)) seeds.push_back(*s);
        if (inner) {
            if (auto s = seed_from(inner->s1.points[k])) seeds.push_back(*s);
            if (auto s = seed_from(inner->s2.points[k])) seeds.push_back(*s);
        }
        if (prev) seeds.push_back(*prev);
        const RaOptimum o = optimize_ra(RaSystem::outer1, link, lp, config, seeds);
        if (o.feasible) prev = o.policy;
        out.o1.points[k] = to_point(lp, o);

        const BoundValue b = outer2_max_secondary(link, lp);
        out.o2.points[k] = RegionPoint{lp, b.value, b.feasible, {}};
    }
    out.combined = pointwise_min(out.o1, out.o2, Variant::ra, BoundKind::outer_intersection);
    return out;
}

RegionCurve strong_mpr_curve(const LinkProbabilities& link, std::span<const double> grid,
                             const GridConfig& config) {
    RegionCurve curve{Variant::strong_mpr, BoundKind::exact, {}};
    const std::array<double, 2> lo{0.0, 0.0}, hi{1.0, 1.0};
    std::optional<Admission> prev;
    std::vector<RegionPoint> pts(grid.size());
    for (std::size_t k = grid.size(); k-- > 0;) {
        const double lp = grid[k];
        RegionPoint pt;
        pt.lambda_p = lp;
        auto value_at = [&](const Admission& a) {
            const StrongMprRates s = strong_mpr_rates(link, lp, a);
            if (lp > s.rates.mu_p || !s.ps_feasible || !s.sd_feasible) {
                return -std::numeric_limits<double>::infinity();
            }
            return s.rates.mu_s;
        };
        double best = -std::numeric_limits<double>::infinity();
        Admission best_a;
        for (KeepPriority keep : {KeepPriority::receiver, KeepPriority::transmitter}) {
            const GridResult g = grid_refine(
                [&](std::span<const double> x) { return value_at({x[0], x[1], keep}); }, lo, hi,
                config);
            if (g.found && g.value > best) {
                best = g.value;
                best_a = {g.point[0], g.point[1], keep};
            }
        }
        if (prev) {
            const double v = value_at(*prev);
            if (v > best) {
                best = v;
                best_a = *prev;
            }
        }
        if (std::isfinite(best)) {
            pt.feasible = true;
            pt.lambda_s_max = std::max(0.0, best);
            pt.argmax.f_s = best_a.f_s;
            pt.argmax.f_sd = best_a.f_sd;
            pt.argmax.keep = best_a.keep;
            prev = best_a;
        }
        pts[k] = pt;
    }
    curve.points = std::move(pts);
    return curve;
}

PolicyPoint to_policy_point(const RaPolicy& p) {
    PolicyPoint pt;
    pt.f_s = p.admission.f_s;
    pt.f_sd = p.admission.f_sd;
    pt.keep = p.admission.keep;
    pt.alpha_s = p.alpha_s;
    pt.alpha_sp = p.alpha_sp;
    pt.alpha_sd = p.alpha_sd;
    return pt;
}

} // namespace coopstab
