#include "doctest.h"

#include "coopstab/optimizer.hpp"
#include "coopstab/region.hpp"

#include <cmath>
#include <limits>

using namespace coopstab;

namespace {
// max -(x-0.3)^2 - (y-0.7)^2  s.t. x + y <= 0.8: optimum (0.2, 0.6), value -0.02.
OptProblem constrained_quadratic() {
    OptProblem p;
    p.lower = {0, 0};
    p.upper = {1, 1};
    p.evaluate = [](std::span<const double> x) {
        const double f = -(x[0] - 0.3) * (x[0] - 0.3) - (x[1] - 0.7) * (x[1] - 0.7);
        return Evaluation{f, std::max(0.0, x[0] + x[1] - 0.8)};
    };
    return p;
}
} // namespace

TEST_CASE("multistart finds a constrained optimum") {
    OptConfig cfg;
    cfg.restarts = 20;
    const OptResult r = multistart_solve(constrained_quadratic(), cfg);
    CHECK(r.feasible);
    CHECK(r.value == doctest::Approx(-0.02).epsilon(1e-4));
    CHECK(r.argmax[0] == doctest::Approx(0.2).epsilon(1e-3));
    CHECK(r.argmax[1] == doctest::Approx(0.6).epsilon(1e-3));
    CHECK(r.argmax[0] + r.argmax[1] <= 0.8 + 1e-12);
}

TEST_CASE("multistart is reproducible and reports infeasibility") {
    OptConfig cfg;
    cfg.restarts = 10;
    const OptResult a = multistart_solve(constrained_quadratic(), cfg);
    const OptResult b = multistart_solve(constrained_quadratic(), cfg);
    CHECK(a.value == b.value);
    CHECK(a.argmax == b.argmax);

    OptProblem never = constrained_quadratic();
    never.evaluate = [](std::span<const double> x) { return Evaluation{x[0], 1.0}; };
    const OptResult n = multistart_solve(never, cfg);
    CHECK_FALSE(n.feasible);
    CHECK(n.value == 0.0);

    // A warm start already at the optimum is kept.
    OptProblem w = constrained_quadratic();
    w.warm_starts = {{0.2, 0.6}};
    cfg.restarts = 1;
    CHECK(multistart_solve(w, cfg).value >= -0.02 - 1e-12);
}

TEST_CASE("grid search with refinement") {
    const std::array<double, 2> lo{0, 0}, hi{1, 1};
    const GridResult g = grid_refine(
        [](std::span<const double> x) {
            if (x[0] + x[1] > 1.2) return -std::numeric_limits<double>::infinity();
            return -std::abs(x[0] - 0.1234) - std::abs(x[1] - 0.5678);
        },
        lo, hi, GridConfig{0.1, 12});
    CHECK(g.found);
    CHECK(g.point[0] == doctest::Approx(0.1234).epsilon(1e-4));
    CHECK(g.point[1] == doctest::Approx(0.5678).epsilon(1e-4));

    const GridResult none = grid_refine(
        [](std::span<const double>) { return -std::numeric_limits<double>::infinity(); }, lo, hi,
        GridConfig{0.25, 2});
    CHECK_FALSE(none.found);
}

TEST_CASE("lambda grid and curve helpers") {
    const std::vector<double> g = lambda_grid(0, 0.91, 0.01);
    CHECK(g.size() == 92);
    CHECK(g.back() == doctest::Approx(0.91));
    CHECK(lambda_grid(0, 0.905, 0.01).size() == 91);

    RegionCurve a{Variant::ra, BoundKind::inner_S1, {{0, 0.5, true, {}}, {0.1, 0.4, true, {}}}};
    RegionCurve b{Variant::ra, BoundKind::inner_S2, {{0, 0.6, true, {}}, {0.1, 0.0, false, {}}}};
    const RegionCurve mx = pointwise_max(a, b, Variant::ra, BoundKind::inner_union);
    CHECK(mx.points[0].lambda_s_max == 0.6);
    CHECK(mx.points[1].lambda_s_max == 0.4);
    CHECK(mx.points[1].feasible);
    const RegionCurve mn = pointwise_min(a, b, Variant::ra, BoundKind::outer_intersection);
    CHECK(mn.points[0].lambda_s_max == 0.5);
    CHECK_FALSE(mn.points[1].feasible);
    CHECK(max_increase(a) <= 0);
    b.points.pop_back();
    CHECK_THROWS(pointwise_max(a, b, Variant::ra, BoundKind::inner_union));

    CHECK(parse_variant("strong_mpr") == Variant::strong_mpr);
    CHECK(to_string(parse_bound("outer_O2")) == "outer_O2");
    CHECK_THROWS(parse_variant("aloha"));
}
