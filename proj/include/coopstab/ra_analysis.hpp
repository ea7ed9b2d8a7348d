#pragma once

#include "coopstab/optimizer.hpp"
#include "coopstab/phy.hpp"
#include "coopstab/policy.hpp"
#include "coopstab/region.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace coopstab {

// Arrival and service rates of the four queues for one configured system.
struct RaRates {
    double mu_p = 0.0;
    double lambda_ps = 0.0;
    double lambda_sd = 0.0;
    double mu_s = 0.0;
    double mu_ps = 0.0;
    double mu_sd = 0.0;
    double cooperation_gain = 0.0;

    // Constraint set of the throughput-maximisation problems (closed).
    bool primary_feasible(double lambda_p) const { return lambda_p <= mu_p; }
    bool relays_feasible() const { return lambda_ps <= mu_ps && lambda_sd <= mu_sd; }
};

struct PrimaryService {
    double mu_p = 0.0;
    double cooperation_gain = 0.0;
};

struct RelayArrivals {
    double lambda_ps = 0.0;
    double lambda_sd = 0.0;
};

// mu_p = Pbar_{p,pd} + P_{p,pd}[f_sd Pbar_{p,sd} + f_s Pbar_{p,s} - f_s Pbar_{p,s} f_sd Pbar_{p,sd}].
// Independent of the keep-priority.
PrimaryService primary_service_rate(const LinkProbabilities& link, double f_s, double f_sd);

// Arrivals to Q_ps and Q_sd. lambda_p/mu_p is clamped to 1 when lambda_p >= mu_p.
// Throws InfeasibleRate when mu_p == 0 and lambda_p > 0.
RelayArrivals relaying_arrival_rates(const LinkProbabilities& link, double lambda_p, double mu_p,
                                     const Admission& admission);

// First dominant system: Q_s and Q_sd transmit dummy packets when empty.
RaRates dominant1_rates(const LinkProbabilities& link, double lambda_p, const RaPolicy& policy);
// Second dominant system: Q_s and Q_ps transmit dummy packets when empty.
RaRates dominant2_rates(const LinkProbabilities& link, double lambda_p, const RaPolicy& policy);
// Decoupled upper bounds on every service rate. mu_sd is capped at 1, which
// cannot change any feasibility verdict because lambda_sd <= 1.
RaRates outer1_rates(const LinkProbabilities& link, double lambda_p, const RaPolicy& policy);

struct BoundValue {
    double value = 0.0;
    bool feasible = true;
};

// lambda_s < (1 - lambda_p / (1 - P_{p,pd}P_{p,sd}P_{p,s})) Pbar_{s,sd}.
BoundValue outer2_max_secondary(const LinkProbabilities& link, double lambda_p);

struct StrongMprRates {
    RaRates rates;
    bool ps_feasible = true; // lambda_ps <= mu_ps
    bool sd_feasible = true; // lambda_sd <= mu_sd
    bool table_is_strong = true;
};

StrongMprRates strong_mpr_rates(const LinkProbabilities& link, double lambda_p,
                                const Admission& admission);

// The three RA problems solved numerically.
enum class RaSystem { dominant1, dominant2, outer1 };

// Rate set of the chosen RA system without throwing: saturated queues use
// busy probability 1.
RaRates ra_rates(RaSystem system, const LinkProbabilities& link, double lambda_p,
                 const RaPolicy& policy);

// Sum of positive constraint violations (lambda_p <= mu_p, lambda_ps <= mu_ps,
// lambda_sd <= mu_sd, alpha_s + alpha_sp <= 1). Zero iff feasible.
double ra_violation(const RaRates& rates, double lambda_p, const RaPolicy& policy);

enum class RaObjective { secondary_service, primary_service };

struct RaOptimum {
    double value = 0.0;
    bool feasible = false;
    RaPolicy policy;
};

// Maximises mu_s (or mu_p) over (alpha_s, alpha_sp, alpha_sd, f_s, f_sd) for
// both keep-priorities. Warm starts are tried before the random restarts.
RaOptimum optimize_ra(RaSystem system, const LinkProbabilities& link, double lambda_p,
                      const OptConfig& config, std::span<const RaPolicy> warm_starts = {},
                      RaObjective objective = RaObjective::secondary_service);

struct InnerBoundCurves {
    RegionCurve s1;
    RegionCurve s2;
    RegionCurve combined; // union of s1 and s2
};

struct OuterBoundCurves {
    RegionCurve o1;
    RegionCurve o2;
    RegionCurve combined; // intersection of o1 and o2
};

InnerBoundCurves inner_bound_curve(const LinkProbabilities& link, std::span<const double> grid,
                                   const OptConfig& config);

// The optimised O1 problem is warm-started from the matching inner optima
// when they are supplied, so the outer curve never falls below them.
OuterBoundCurves outer_bound_curve(const LinkProbabilities& link, std::span<const double> grid,
                                   const OptConfig& config,
                                   const InnerBoundCurves* inner = nullptr);

// Region of the strong-MPR rate set: max over (f_s, f_sd, P) of mu_s subject
// to both relaying constraints.
RegionCurve strong_mpr_curve(const LinkProbabilities& link, std::span<const double> grid,
                             const GridConfig& config = {});

PolicyPoint to_policy_point(const RaPolicy& policy);

} // namespace coopstab
