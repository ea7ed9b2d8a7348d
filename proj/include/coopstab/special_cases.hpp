#pragma once

#include "coopstab/optimizer.hpp"
#include "coopstab/phy.hpp"
#include "coopstab/region.hpp"

#include <span>

namespace coopstab {

// Systems without SR relaying (f_sd = 0). In the prioritized system the ST
// always serves its relaying queue first; in the non-prioritized one it
// picks its own queue with probability alpha_s and the relaying queue with
// alpha_sp.
struct SpecialCaseRates {
    double mu_p = 0.0;
    double lambda_ps = 0.0;
    double mu_ps = 0.0;
    double mu_s = 0.0;
    double k = 0.0; // P_{p,pd} Pbar_{p,s}
};

// K = P_{p,pd} Pbar_{p,s}.
double cooperation_constant(const LinkProbabilities& link);

// Throws InfeasibleRate when both the primary and the relaying queue saturate.
SpecialCaseRates priority_rates(const LinkProbabilities& link, double lambda_p, double f_s);
SpecialCaseRates nonpriority_rates(const LinkProbabilities& link, double lambda_p, double f_s,
                                   double alpha_s, double alpha_sp);

// Optimal f_s for the prioritized system: a single value, or the whole
// interval [0,1] when the choice does not matter (lo = 0, hi = 1, value = 0).
struct AdmissionChoice {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;

    bool is_interval() const { return hi > lo; }
};
AdmissionChoice optimal_admission_priority(const LinkProbabilities& link, double lambda_p);

struct PriorityBoundary {
    double lambda_s_max = 0.0;
    bool feasible = false;
    double f_s = 0.0;
    double slope = 0.0; // d lambda_s_max / d lambda_p on the active branch
};
PriorityBoundary priority_region_boundary(const LinkProbabilities& link, double lambda_p);

struct NonPriorityOptimum {
    double f_s = 0.0;
    double alpha_s = 0.0;
    double alpha_sp = 0.0;
    double lambda_s_max = 0.0;
    bool feasible = false;
};

// 1-D search over f_s with the closed-form inner optimum for alpha_s.
NonPriorityOptimum nonpriority_optimal(const LinkProbabilities& link, double lambda_p,
                                       const GridConfig& config = {0.005, 12});

// alpha_s* = 1 - f_s K lambda_p / ((Pbar_{p,pd} + f_s K - lambda_p) Pbar_{s,pd}).
// Unclamped; NaN when the denominator vanishes.
double optimal_alpha_s(const LinkProbabilities& link, double lambda_p, double f_s);
// d alpha_s* / d f_s = -(Pbar_{p,pd} - lambda_p) K lambda_p /
//                      ((Pbar_{p,pd} + f_s K - lambda_p)^2 Pbar_{s,pd}).
double optimal_alpha_s_derivative(const LinkProbabilities& link, double lambda_p, double f_s);

// lambda_p_max = mu_p min{Pbar_{s,pd} / (f_s K + alpha_sp Pbar_{s,pd}), 1}.
double combined_primary_constraint(const LinkProbabilities& link, double f_s, double alpha_sp);

struct MonotonicityVerdict {
    bool domain_ok = true;  // every denominator positive on the grid
    bool nonincreasing = true;
    bool derivative_nonpositive = true;
    double max_step_increase = 0.0;
    double max_derivative = 0.0;

    bool holds() const { return domain_ok && nonincreasing && derivative_nonpositive; }
};
MonotonicityVerdict alpha_monotonicity_check(const LinkProbabilities& link, double lambda_p,
                                             std::span<const double> f_grid);

RegionCurve priority_curve(const LinkProbabilities& link, std::span<const double> grid);
RegionCurve nonpriority_curve(const LinkProbabilities& link, std::span<const double> grid,
                              const GridConfig& config = {0.005, 12});
// No relaying at all: lambda_s < (1 - lambda_p / Pbar_{p,pd}) Pbar_{s,sd}.
// A primary that never succeeds leaves only the origin.
RegionCurve no_coop_curve(const LinkProbabilities& link, std::span<const double> grid);

} // namespace coopstab
