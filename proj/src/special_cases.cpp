#include "coopstab/special_cases.hpp"

#include "coopstab/error.hpp"
#include "coopstab/queueing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace coopstab {

namespace {

void require_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidParameter(std::string(name) + " must lie in [0,1], got " + std::to_string(v));
    }
}

// lambda_s achievable at a fixed f_s; identical for both special systems.
double secondary_at(const LinkProbabilities& link, double lambda_p, double f_s) {
    const double k = cooperation_constant(link);
    const double direct = link.success(Link::p_pd);
    const double relay = link.success(Link::s_pd);
    const double mu_p = direct + f_s * k;
    if (lambda_p == 0.0) return link.success(Link::s_sd);
    if (!(lambda_p < mu_p)) return -std::numeric_limits<double>::infinity();
    const double a = optimal_alpha_s(link, lambda_p, f_s);
    if (relay <= 0.0 && f_s * k > 0.0) return -std::numeric_limits<double>::infinity();
    if (!(a >= -1e-15)) return -std::numeric_limits<double>::infinity();
    return std::max(0.0, a) * (1.0 - lambda_p / mu_p) * link.success(Link::s_sd);
}

} // namespace

double cooperation_constant(const LinkProbabilities& link) {
    return link.outage(Link::p_pd) * link.success(Link::p_s);
}

SpecialCaseRates priority_rates(const LinkProbabilities& link, double lambda_p, double f_s) {
    require_unit(lambda_p, "lambda_p");
    require_unit(f_s, "f_s");
    SpecialCaseRates r;
    r.k = cooperation_constant(link);
    r.mu_p = link.success(Link::p_pd) + f_s * r.k;
    const double busy = busy_probability(lambda_p, r.mu_p);
    r.lambda_ps = f_s * r.k * busy;
    r.mu_ps = (1.0 - busy) * link.success(Link::s_pd);
    if (lambda_p >= r.mu_p && r.lambda_ps >= r.mu_ps && r.lambda_ps > 0.0) {
        throw InfeasibleRate("primary and relaying queues both saturate");
    }
    r.mu_s = (1.0 - busy) * (1.0 - busy_probability(r.lambda_ps, r.mu_ps)) *
             link.success(Link::s_sd);
    return r;
}

SpecialCaseRates nonpriority_rates(const LinkProbabilities& link, double lambda_p, double f_s,
                                   double alpha_s, double alpha_sp) {
    require_unit(lambda_p, "lambda_p");
    require_unit(f_s, "f_s");
    require_unit(alpha_s, "alpha_s");
    require_unit(alpha_sp, "alpha_sp");
    if (alpha_s + alpha_sp > 1.0 + 1e-12) {
        throw InvalidParameter("alpha_s + alpha_sp must not exceed 1");
    }
    SpecialCaseRates r;
    r.k = cooperation_constant(link);
    r.mu_p = link.success(Link::p_pd) + f_s * r.k;
    const double busy = busy_probability(lambda_p, r.mu_p);
    r.lambda_ps = f_s * r.k * busy;
    r.mu_ps = (1.0 - busy) * alpha_sp * link.success(Link::s_pd);
    if (lambda_p >= r.mu_p && r.lambda_ps >= r.mu_ps && r.lambda_ps > 0.0) {
        throw InfeasibleRate("primary and relaying queues both saturate");
    }
    r.mu_s = (1.0 - busy) * alpha_s * link.success(Link::s_sd);
    return r;
}

AdmissionChoice optimal_admission_priority(const LinkProbabilities& link, double lambda_p) {
    require_unit(lambda_p, "lambda_p");
    const double direct = link.success(Link::p_pd);
    const double relay = link.success(Link::s_pd);
    if (lambda_p == 0.0 || direct == relay || cooperation_constant(link) == 0.0) {
        return {0.0, 0.0, 1.0};
    }
    return direct < relay ? AdmissionChoice{1.0, 1.0, 1.0} : AdmissionChoice{0.0, 0.0, 0.0};
}

PriorityBoundary priority_region_boundary(const LinkProbabilities& link, double lambda_p) {
    require_unit(lambda_p, "lambda_p");
    const double k = cooperation_constant(link);
    const double direct = link.success(Link::p_pd);
    const double relay = link.success(Link::s_pd);
    const double ssd = link.success(Link::s_sd);
    PriorityBoundary b;
    if (direct < relay && k > 0.0) {
        b.f_s = 1.0;
        const double mu_p = direct + k;
        b.slope = -ssd * (relay + k) / (relay * mu_p);
        const double v = ssd / mu_p * (mu_p - (1.0 + k / relay) * lambda_p);
        b.feasible = v >= 0.0;
        b.lambda_s_max = std::max(0.0, v);
        return b;
    }
    b.f_s = 0.0;
    if (direct <= 0.0) {
        // Neither the primary nor the relay path ever delivers.
        b.feasible = lambda_p == 0.0;
        b.lambda_s_max = b.feasible ? ssd : 0.0;
        return b;
    }
    b.slope = -ssd / direct;
    const double v = (1.0 - lambda_p / direct) * ssd;
    b.feasible = v >= 0.0;
    b.lambda_s_max = std::max(0.0, v);
    return b;
}

double optimal_alpha_s(const LinkProbabilities& link, double lambda_p, double f_s) {
    const double k = cooperation_constant(link);
    const double den = (link.success(Link::p_pd) + f_s * k - lambda_p) * link.success(Link::s_pd);
    const double num = f_s * k * lambda_p;
    if (num == 0.0) return 1.0;
    if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return 1.0 - num / den;
}

double optimal_alpha_s_derivative(const LinkProbabilities& link, double lambda_p, double f_s) {
    const double k = cooperation_constant(link);
    const double direct = link.success(Link::p_pd);
    const double gap = direct + f_s * k - lambda_p;
    const double num = (direct - lambda_p) * k * lambda_p;
    if (num == 0.0) return 0.0;
    const double den = gap * gap * link.success(Link::s_pd);
    if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return -num / den;
}

NonPriorityOptimum nonpriority_optimal(const LinkProbabilities& link, double lambda_p,
                                       const GridConfig& config) {
    require_unit(lambda_p, "lambda_p");
    const std::array<double, 1> lo{0.0}, hi{1.0};
    const GridResult g = grid_refine(
        [&](std::span<const double> x) { return secondary_at(link, lambda_p, x[0]); }, lo, hi,
        config);
    NonPriorityOptimum out;
    if (!g.found) return out;
    out.feasible = true;
    out.f_s = g.point[0];
    double value = g.value;
    // Flat objective (equal links, lambda_p = 0): report the canonical f_s = 0.
    if (const double at0 = secondary_at(link, lambda_p, 0.0); at0 >= value - 1e-12) {
        out.f_s = 0.0;
        value = std::max(value, at0);
    }
    out.alpha_s = std::clamp(optimal_alpha_s(link, lambda_p, out.f_s), 0.0, 1.0);
    out.alpha_sp = 1.0 - out.alpha_s;
    out.lambda_s_max = std::max(0.0, value);
    return out;
}

double combined_primary_constraint(const LinkProbabilities& link, double f_s, double alpha_sp) {
    require_unit(f_s, "f_s");
    require_unit(alpha_sp, "alpha_sp");
    const double k = cooperation_constant(link);
    const double relay = link.success(Link::s_pd);
    const double mu_p = link.success(Link::p_pd) + f_s * k;
    const double den = f_s * k + alpha_sp * relay;
    const double factor = den > 0.0 ? std::min(relay / den, 1.0) : 1.0;
    return mu_p * factor;
}

MonotonicityVerdict alpha_monotonicity_check(const LinkProbabilities& link, double lambda_p,
                                             std::span<const double> f_grid) {
    MonotonicityVerdict v;
    const double k = cooperation_constant(link);
    const double direct = link.success(Link::p_pd);
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (double f : f_grid) {
        if (lambda_p > 0.0 && !(direct + f * k - lambda_p > 0.0)) v.domain_ok = false;
        const double a = optimal_alpha_s(link, lambda_p, f);
        const double d = optimal_alpha_s_derivative(link, lambda_p, f);
        if (!std::isnan(prev) && !std::isnan(a)) {
            v.max_step_increase = std::max(v.max_step_increase, a - prev);
            if (a > prev + 1e-12) v.nonincreasing = false;
        }
        if (std::isnan(d) || d > 0.0) v.derivative_nonpositive = false;
        if (!std::isnan(d)) v.max_derivative = std::max(v.max_derivative, d);
        prev = a;
    }
    return v;
}

RegionCurve priority_curve(const LinkProbabilities& link, std::span<const double> grid) {
    RegionCurve c{Variant::priority, BoundKind::exact, {}};
    for (double lp : grid) {
        const PriorityBoundary b = priority_region_boundary(link, lp);
        RegionPoint pt{lp, b.lambda_s_max, b.feasible, {}};
        if (b.feasible) {
            pt.argmax.f_s = b.f_s;
            pt.argmax.f_sd = 0.0;
        }
        c.points.push_back(pt);
    }
    return c;
}

RegionCurve nonpriority_curve(const LinkProbabilities& link, std::span<const double> grid,
                              const GridConfig& config) {
    RegionCurve c{Variant::nonpriority, BoundKind::exact, {}};
    for (double lp : grid) {
        const NonPriorityOptimum o = nonpriority_optimal(link, lp, config);
        RegionPoint pt{lp, o.lambda_s_max, o.feasible, {}};
        if (o.feasible) {
            pt.argmax.f_s = o.f_s;
            pt.argmax.f_sd = 0.0;
            pt.argmax.alpha_s = o.alpha_s;
            pt.argmax.alpha_sp = o.alpha_sp;
        }
        c.points.push_back(pt);
    }
    return c;
}

RegionCurve no_coop_curve(const LinkProbabilities& link, std::span<const double> grid) {
    RegionCurve c{Variant::no_coop, BoundKind::exact, {}};
    const double direct = link.success(Link::p_pd);
    const double ssd = link.success(Link::s_sd);
    for (double lp : grid) {
        RegionPoint pt{lp, 0.0, false, {}};
        if (direct <= 0.0) {
            pt.feasible = lp == 0.0;
        } else if (lp <= direct) {
            pt.feasible = true;
            pt.lambda_s_max = (1.0 - lp / direct) * ssd;
        }
        if (pt.feasible) {
            pt.argmax.f_s = 0.0;
            pt.argmax.f_sd = 0.0;
        }
        c.points.push_back(pt);
    }
    return c;
}

} // namespace coopstab
