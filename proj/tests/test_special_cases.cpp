#include "doctest.h"

#include "fixtures.hpp"

#include "coopstab/simulator.hpp"
#include "coopstab/special_cases.hpp"

#include <cmath>
#include <random>

using namespace coopstab;

TEST_CASE("prioritized rates") {
    const LinkProbabilities l = fixtures::weak_table();
    CHECK(cooperation_constant(l) == doctest::Approx(0.7));
    const SpecialCaseRates r = priority_rates(l, 0.2, 1.0);
    CHECK(r.mu_p == doctest::Approx(0.7));
    CHECK(r.lambda_ps == doctest::Approx(0.2));
    CHECK(r.mu_ps == doctest::Approx((1 - 2.0 / 7) * 0.8));
    CHECK(r.mu_s == doctest::Approx(5.0 / 7 * (1 - 0.35) * 0.9));
    CHECK(r.mu_s == doctest::Approx(0.4179).epsilon(1e-3));

    const LinkProbabilities m = fixtures::mixed_table();
    CHECK(priority_rates(m, 0.2, 0).mu_s == doctest::Approx((1 - 0.2 / 0.5) * 0.85));
    CHECK(priority_rates(m, 0, 0.6).mu_s == doctest::Approx(0.85));
}

TEST_CASE("prioritized rates agree with slot simulation") {
    const LinkProbabilities l = fixtures::mixed_table();
    const SpecialCaseRates a = priority_rates(l, 0.3, 0.6);
    SimConfig cfg{Variant::priority, l};
    cfg.lambda_p = 0.3;
    cfg.lambda_s = 0.05;
    cfg.policy = RaPolicy{0, 0, 0, Admission{0.6, 0, KeepPriority::receiver}};
    cfg.replicas = 4;
    const SimReport r = run(cfg);
    for (auto [e, x] : {std::pair{r[QueueId::p].service, a.mu_p},
                        std::pair{r[QueueId::ps].arrival, a.lambda_ps},
                        std::pair{r[QueueId::ps].service, a.mu_ps},
                        std::pair{r[QueueId::s].service, a.mu_s}}) {
        INFO(e.mean << " vs " << x);
        CHECK(std::abs(e.mean - x) <= 3 * e.se);
    }
}

TEST_CASE("optimal admission in the prioritized system") {
    CHECK(optimal_admission_priority(fixtures::weak_table(), 0.3).value == 1.0);
    const LinkProbabilities good_direct({0.9, 0.7, 0.7, 0.9, 0.5, 0.8}, {0.3, 0.3});
    CHECK(optimal_admission_priority(good_direct, 0.4).value == 0.0);
    CHECK_FALSE(optimal_admission_priority(good_direct, 0.4).is_interval());
    const AdmissionChoice any = optimal_admission_priority(fixtures::weak_table(), 0.0);
    CHECK(any.is_interval());
    CHECK(any.lo == 0.0);
    CHECK(any.hi == 1.0);
}

TEST_CASE("prioritized boundary") {
    const LinkProbabilities l = fixtures::weak_table();
    CHECK(priority_region_boundary(l, 0).lambda_s_max == doctest::Approx(0.9));
    const PriorityBoundary b = priority_region_boundary(l, 0.2);
    CHECK(b.lambda_s_max == doctest::Approx(0.9 / 0.7 * 0.325));
    CHECK(b.lambda_s_max == doctest::Approx(priority_rates(l, 0.2, 1.0).mu_s));
    const LinkProbabilities good_direct({0.9, 0.7, 0.7, 0.9, 0.5, 0.8}, {0.3, 0.3});
    CHECK(priority_region_boundary(good_direct, 0.4).lambda_s_max ==
          doctest::Approx((1 - 0.4 / 0.9) * 0.9));

    // Slope against a central difference, and affinity at three points.
    for (const LinkProbabilities& t : {l, good_direct, fixtures::mixed_table()}) {
        const double x = 0.15, h = 1e-4;
        const double fd = (priority_region_boundary(t, x + h).lambda_s_max -
                           priority_region_boundary(t, x - h).lambda_s_max) /
                          (2 * h);
        CHECK(priority_region_boundary(t, x).slope == doctest::Approx(fd).epsilon(1e-6));
        const double y0 = priority_region_boundary(t, 0.05).lambda_s_max;
        const double y1 = priority_region_boundary(t, 0.10).lambda_s_max;
        const double y2 = priority_region_boundary(t, 0.15).lambda_s_max;
        CHECK(std::abs(y0 - 2 * y1 + y2) <= 1e-9);
    }
    CHECK_FALSE(priority_region_boundary(l, 0.5).feasible);
    CHECK(priority_region_boundary(l, 0.5).lambda_s_max == 0.0);
}

TEST_CASE("non-prioritized optimum") {
    const LinkProbabilities l = fixtures::weak_table();
    const NonPriorityOptimum z = nonpriority_optimal(l, 0);
    CHECK(z.alpha_s == doctest::Approx(1.0));
    CHECK(z.lambda_s_max == doctest::Approx(0.9));

    CHECK(optimal_alpha_s(l, 0.2, 1.0) == doctest::Approx(0.65));
    for (double lp : {0.05, 0.1, 0.2, 0.3}) {
        CHECK(nonpriority_optimal(l, lp).lambda_s_max ==
              doctest::Approx(priority_region_boundary(l, lp).lambda_s_max).epsilon(1e-3));
    }
    const LinkProbabilities equal({0.8, 0.7, 0.7, 0.9, 0.8, 0.8}, {0.3, 0.3});
    const NonPriorityOptimum e = nonpriority_optimal(equal, 0.3);
    CHECK(e.f_s == 0.0);
    CHECK(e.alpha_s == doctest::Approx(1.0));
    CHECK(e.alpha_sp == doctest::Approx(0.0));
    CHECK_FALSE(nonpriority_optimal(l, 0.6).feasible);
}

TEST_CASE("non-prioritized curve matches the prioritized one") {
    const LinkProbabilities l = fixtures::mixed_table();
    const std::vector<double> grid = lambda_grid(0, 0.92, 0.01);
    const RegionCurve p = priority_curve(l, grid);
    const RegionCurve n = nonpriority_curve(l, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(std::abs(p.points[k].lambda_s_max - n.points[k].lambda_s_max) <= 1e-3);
    }
    CHECK(max_increase(p) <= 1e-9);
    CHECK(max_increase(n) <= 1e-9);
}

TEST_CASE("combined primary constraint") {
    const LinkProbabilities l = fixtures::weak_table();
    const LinkProbabilities m = fixtures::mixed_table();
    CHECK(combined_primary_constraint(m, 0, 0) == doctest::Approx(0.5));
    CHECK(combined_primary_constraint(l, 1, 1) == doctest::Approx(0.7 * 0.8 / 1.5));
    CHECK(combined_primary_constraint(m, 0, 1) == doctest::Approx(0.5));
}

TEST_CASE("monotonicity of the optimal alpha_s") {
    const LinkProbabilities l = fixtures::mixed_table(); // K = 0.35, Pbar_{s,pd} = 0.8
    std::vector<double> grid;
    for (int i = 0; i < 200; ++i) grid.push_back(i / 199.0);
    const MonotonicityVerdict v = alpha_monotonicity_check(l, 0.3, grid);
    CHECK(v.holds());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(optimal_alpha_s(l, 0.3, grid[i]) < optimal_alpha_s(l, 0.3, grid[i - 1]));
    }
    CHECK(alpha_monotonicity_check(l, 0, grid).holds());
    CHECK(optimal_alpha_s_derivative(l, 0, 0.5) == 0.0);

    // Derivative against central differences, including a table where the
    // direct link is dead and alpha_s* grows with f_s.
    for (const LinkProbabilities& t : {l, fixtures::weak_table()}) {
        const double lp = t.success(Link::p_pd) > 0 ? 0.3 : 0.2;
        for (double f : {0.5, 0.7, 0.9}) {
            const double h = 1e-6;
            const double fd = (optimal_alpha_s(t, lp, f + h) - optimal_alpha_s(t, lp, f - h)) / (2 * h);
            CHECK(optimal_alpha_s_derivative(t, lp, f) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
    CHECK(optimal_alpha_s_derivative(fixtures::weak_table(), 0.2, 0.9) > 0.0);

    // Random tables with 0 < lambda_p < Pbar_{p,pd}.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int i = 0; i < 20; ++i) {
        std::array<double, 6> d;
        for (double& x : d) x = u(rng);
        const LinkProbabilities t(d, {d[4] * u(rng), d[5] * u(rng)});
        const double lp = d[0] * u(rng);
        CHECK(alpha_monotonicity_check(t, lp, grid).holds());
    }
}

TEST_CASE("no cooperation") {
    const RegionCurve w = no_coop_curve(fixtures::weak_table(), lambda_grid(0, 0.5, 0.1));
    CHECK(w.points[0].feasible);
    CHECK(w.points[0].lambda_s_max == 0.0);
    CHECK_FALSE(w.points[1].feasible);
    const RegionCurve m = no_coop_curve(fixtures::mixed_table(), lambda_grid(0, 0.5, 0.1));
    CHECK(m.points[2].lambda_s_max == doctest::Approx((1 - 0.2 / 0.5) * 0.85));
    CHECK(m.points[5].lambda_s_max == doctest::Approx(0.0).epsilon(1e-12));
}
