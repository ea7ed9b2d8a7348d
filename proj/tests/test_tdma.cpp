#include "doctest.h"

#include "fixtures.hpp"

#include "coopstab/simulator.hpp"
#include "coopstab/tdma_analysis.hpp"

#include <cmath>

using namespace coopstab;

namespace {
const Admission kFull{1, 1, KeepPriority::receiver};

// Bisection on the feasibility verdict of the split, independent of the
// closed-form boundary.
double split_edge(const LinkProbabilities& l, double lp, const Admission& a) {
    double lo = 0.0, hi = 1.0;
    if (!tdma_optimal_split(l, lp, 0.0, a).feasible) return 0.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (tdma_optimal_split(l, lp, mid, a).feasible ? lo : hi) = mid;
    }
    return lo;
}
} // namespace

TEST_CASE("TDMA service rates") {
    const LinkProbabilities l = fixtures::weak_table();
    const RaRates a = tdma_rates(l, 0, TdmaPolicy{1, 1, kFull});
    CHECK(a.mu_s == doctest::Approx(0.9));
    CHECK(a.mu_sd == 0.0);
    const RaRates b = tdma_rates(l, 0.3, TdmaPolicy{0, 0.7, kFull});
    CHECK(b.mu_s == 0.0);
    CHECK(b.mu_ps == 0.0);
    CHECK(b.mu_sd == doctest::Approx((1 - 0.3 / 0.91) * 0.8));
}

TEST_CASE("TDMA rates agree with slot simulation") {
    const LinkProbabilities l = fixtures::weak_table();
    const TdmaPolicy p{0.5, 0.5, kFull};
    const RaRates a = tdma_rates(l, 0.3, p);
    SimConfig cfg{Variant::tdma, l};
    cfg.lambda_p = 0.3;
    cfg.lambda_s = 0.05;
    cfg.policy = p;
    cfg.replicas = 4;
    const SimReport r = run(cfg);
    const std::array<std::pair<RateEstimate, double>, 6> pairs = {{
        {r[QueueId::p].service, a.mu_p},
        {r[QueueId::ps].arrival, a.lambda_ps},
        {r[QueueId::sd].arrival, a.lambda_sd},
        {r[QueueId::s].service, a.mu_s},
        {r[QueueId::ps].service, a.mu_ps},
        {r[QueueId::sd].service, a.mu_sd},
    }};
    for (const auto& [e, x] : pairs) {
        INFO(e.mean << " vs " << x);
        CHECK(std::abs(e.mean - x) <= 3 * e.se);
    }
}

TEST_CASE("TDMA optimal split") {
    const LinkProbabilities l = fixtures::weak_table();
    const TdmaSplit z = tdma_optimal_split(l, 0, 0.5, kFull);
    CHECK(z.relay_ps == 0.0);
    CHECK(z.relay_sd == 0.0);
    CHECK(z.feasible);

    // Three ratios by hand: idle 0.61/0.91.
    const double idle = 1 - 0.3 / 0.91;
    const TdmaSplit s = tdma_optimal_split(l, 0.3, 0.2, kFull);
    CHECK(s.own == doctest::Approx(0.2 / (idle * 0.9)));
    CHECK(s.relay_ps == doctest::Approx(0.3 / 0.91 * 0.21 / (idle * 0.8)));
    CHECK(s.relay_sd == doctest::Approx(0.3 / 0.91 * 0.7 / (idle * 0.8)));
    CHECK(s.own == doctest::Approx(0.3315).epsilon(1e-3));
    CHECK(s.relay_ps == doctest::Approx(0.1291).epsilon(1e-3));
    CHECK(s.relay_sd == doctest::Approx(0.4303).epsilon(1e-3));
    CHECK(s.feasible);
    CHECK(s.omega == doctest::Approx(1 - s.relay_sd));
    CHECK(s.omega * s.alpha == doctest::Approx(s.own));

    // The split's policy meets every relaying constraint with equality.
    const RaRates r = tdma_rates(l, 0.3, TdmaPolicy{s.omega, s.alpha, kFull});
    CHECK(r.mu_sd == doctest::Approx(r.lambda_sd));
    CHECK(r.mu_s == doctest::Approx(0.2));

    CHECK_FALSE(tdma_optimal_split(l, 0.3, 0.27, kFull).feasible);
}

TEST_CASE("TDMA region boundary") {
    const LinkProbabilities l = fixtures::weak_table();
    CHECK(tdma_region_boundary(l, 0, kFull).value == doctest::Approx(0.9));
    CHECK(tdma_region_boundary(l, 0.3, kFull).value == doctest::Approx(0.2658).epsilon(1e-3));
    for (double lp : {0.05, 0.3, 0.5, 0.7}) {
        CHECK(tdma_region_boundary(l, lp, kFull).value ==
              doctest::Approx(split_edge(l, lp, kFull)).epsilon(1e-6));
    }
    // Relaying alone needs more than a slot here.
    CHECK(tdma_region_boundary(l, 0.85, kFull).value == 0.0);
    CHECK_FALSE(tdma_region_boundary(l, 0.85, kFull).feasible);
}

TEST_CASE("TDMA optimum over admission") {
    const LinkProbabilities l = fixtures::weak_table();
    GridConfig g{0.05, 4};
    CHECK(tdma_max_secondary(l, 0, g).value == doctest::Approx(0.9));
    double prev = 1.0;
    // With a dead direct link every packet is relayed: lambda_p/0.8 <= 1 - lambda_p/0.91
    // caps TDMA at lambda_p ~ 0.4257.
    for (double lp : {0.1, 0.2, 0.3, 0.4, 0.42}) {
        const TdmaOptimum o = tdma_max_secondary(l, lp, g);
        CHECK(o.feasible);
        CHECK(o.value >= tdma_region_boundary(l, lp, kFull).value - 1e-12);
        CHECK(o.value <= prev);
        prev = o.value;
    }
    CHECK(prev > 0.0);
    CHECK_FALSE(tdma_max_secondary(l, 0.43, g).feasible);
    const TdmaOptimum m = tdma_max_primary(l, 0.2, g);
    CHECK(m.value == doctest::Approx(0.91));
}

TEST_CASE("TDMA curve is monotone") {
    const RegionCurve c = tdma_curve(fixtures::weak_table(), lambda_grid(0, 0.91, 0.05), {0.05, 4});
    CHECK(max_increase(c) <= 1e-9);
    CHECK(c.points.front().lambda_s_max == doctest::Approx(0.9));
}
