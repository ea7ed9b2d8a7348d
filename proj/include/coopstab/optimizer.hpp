#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace coopstab {

// Objective and total constraint violation at one point. violation == 0 iff
// the point is feasible.
struct Evaluation {
    double objective = 0.0;
    double violation = 0.0;
};

// Box-constrained maximisation with a feasibility oracle.
struct OptProblem {
    std::vector<double> lower;
    std::vector<double> upper;
    std::function<Evaluation(std::span<const double>)> evaluate;
    // Maps a box point onto the linear constraints; optional.
    std::function<void(std::span<double>)> repair;
    // Tried before the random starts, in order.
    std::vector<std::vector<double>> warm_starts;

    std::size_t dimension() const { return lower.size(); }
};

struct OptConfig {
    int restarts = 500;
    std::uint64_t seed = 20130611;
    double initial_step = 0.1;
    double min_step = 1e-5;
    double shrink = 0.5;
};

struct OptResult {
    double value = 0.0;
    std::vector<double> argmax;
    bool feasible = false;
    int restarts = 0;
    std::uint64_t seed = 0;
};

// Pattern search from each start: first drive the violation to zero, then
// climb the objective through feasible points only. Restart i draws from a
// generator seeded with (seed, i), so results do not depend on scheduling.
// Ties keep the earliest start. No feasible point -> feasible = false, value 0.
OptResult multistart_solve(const OptProblem& problem, const OptConfig& config);

struct GridConfig {
    double coarse_step = 0.01;
    int refine_rounds = 6;
};

struct GridResult {
    std::vector<double> point;
    double value = 0.0;
    bool found = false; // false when every evaluation returned -inf
};

// Exhaustive grid over the box, then refine_rounds local grids of half the
// previous spacing around the incumbent. Evaluators return -infinity for
// infeasible points. Ties keep the first point in lexicographic order.
GridResult grid_refine(const std::function<double(std::span<const double>)>& evaluator,
                       std::span<const double> lower, std::span<const double> upper,
                       const GridConfig& config);

} // namespace coopstab
