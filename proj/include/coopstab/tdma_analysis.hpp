#pragma once

#include "coopstab/optimizer.hpp"
#include "coopstab/phy.hpp"
#include "coopstab/policy.hpp"
#include "coopstab/ra_analysis.hpp"
#include "coopstab/region.hpp"

#include <span>

namespace coopstab {

// mu_p, lambda_ps, lambda_sd as in the RA system; the secondary services
// are collision free. Throws InfeasibleRate when mu_p == 0 and lambda_p > 0.
RaRates tdma_rates(const LinkProbabilities& link, double lambda_p, const TdmaPolicy& policy);

// Shares of idle slots each queue needs: omega*alpha for Q_s,
// omega*(1-alpha) for Q_ps and 1-omega for Q_sd.
struct TdmaSplit {
    double own = 0.0;
    double relay_ps = 0.0;
    double relay_sd = 0.0;
    double omega = 0.0; // 1 - relay_sd
    double alpha = 0.0; // own / omega, 0 when omega == 0
    bool feasible = false;

    double total() const { return own + relay_ps + relay_sd; }
};
TdmaSplit tdma_optimal_split(const LinkProbabilities& link, double lambda_p, double lambda_s,
                             const Admission& admission);

// (1 - lambda_p/mu_p) Pbar_{s,sd} (1 - relay_sd - relay_ps), clamped at 0.
BoundValue tdma_region_boundary(const LinkProbabilities& link, double lambda_p,
                                const Admission& admission);

struct TdmaOptimum {
    double value = 0.0;
    bool feasible = false;
    TdmaPolicy policy;
};

// Grid over (f_s, f_sd) for both keep-priorities; ties go to P = 1.
TdmaOptimum tdma_max_secondary(const LinkProbabilities& link, double lambda_p,
                               const GridConfig& config = {});

// Largest mu_p over (f_s, f_sd, P) keeping both relaying queues stable at
// lambda_p with no secondary traffic. f_s = f_sd = 0 is always admissible.
TdmaOptimum tdma_max_primary(const LinkProbabilities& link, double lambda_p,
                             const GridConfig& config = {});

RegionCurve tdma_curve(const LinkProbabilities& link, std::span<const double> grid,
                       const GridConfig& config = {});

} // namespace coopstab
