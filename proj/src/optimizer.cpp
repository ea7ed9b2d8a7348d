#include "coopstab/optimizer.hpp"

#include "coopstab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace coopstab {

namespace {

constexpr double kFeasibleTol = 1e-12;
constexpr int kMaxMovesPerStep = 2000;

bool feasible(const Evaluation& e) { return e.violation <= kFeasibleTol; }

// Coordinate directions first, then the pairwise diagonals which let the
// search slide along two coupled constraints at once.
std::vector<std::vector<double>> poll_directions(std::size_t n) {
    std::vector<std::vector<double>> dirs;
    for (std::size_t i = 0; i < n; ++i) {
        for (double s : {1.0, -1.0}) {
            std::vector<double> d(n, 0.0);
            d[i] = s;
            dirs.push_back(std::move(d));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (double si : {1.0, -1.0}) {
                for (double sj : {1.0, -1.0}) {
                    std::vector<double> d(n, 0.0);
                    d[i] = si;
                    d[j] = sj;
                    dirs.push_back(std::move(d));
                }
            }
        }
    }
    return dirs;
}

class LocalSearch {
public:
    LocalSearch(const OptProblem& problem, const OptConfig& config)
        : problem_(problem), config_(config), dirs_(poll_directions(problem.dimension())) {}

    // Returns the final point's evaluation; x is updated in place.
    Evaluation run(std::vector<double>& x) {
        project(x);
        Evaluation cur = problem_.evaluate(x);
        if (!feasible(cur)) {
            cur = climb(x, cur, [](const Evaluation& now, const Evaluation& cand) {
                return cand.violation < now.violation;
            }, true);
            if (!feasible(cur)) return cur;
        }
        return climb(x, cur, [](const Evaluation& now, const Evaluation& cand) {
            return feasible(cand) && cand.objective > now.objective;
        }, false);
    }

    // Starts are repaired; moves are only clamped, so a move can never
    // creep forward through the repair map.
    void project(std::vector<double>& x) const {
        clamp_to_box(x);
        if (problem_.repair) problem_.repair(x);
    }

    void clamp_to_box(std::vector<double>& x) const {
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = std::clamp(x[i], problem_.lower[i], problem_.upper[i]);
        }
    }

private:
    template <class Better>
    Evaluation climb(std::vector<double>& x, Evaluation cur, Better better, bool stop_when_feasible) {
        std::vector<double> y(x.size());
        for (double step = config_.initial_step; step >= config_.min_step; step *= config_.shrink) {
            for (int moves = 0; moves < kMaxMovesPerStep; ++moves) {
                bool moved = false;
                for (const auto& d : dirs_) {
                    // Keep following a direction while it pays off.
                    for (;;) {
                        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + step * d[i];
                        clamp_to_box(y);
                        if (y == x) break;
                        const Evaluation cand = problem_.evaluate(y);
                        if (!better(cur, cand)) break;
                        x = y;
                        cur = cand;
                        moved = true;
                        if (stop_when_feasible && feasible(cur)) return cur;
                    }
                    if (moved) break;
                }
                if (!moved) break;
            }
        }
        return cur;
    }

    const OptProblem& problem_;
    const OptConfig& config_;
    std::vector<std::vector<double>> dirs_;
};

} // namespace

OptResult multistart_solve(const OptProblem& problem, const OptConfig& config) {
    const std::size_t n = problem.dimension();
    if (n == 0 || problem.upper.size() != n) throw InvalidParameter("box bounds are malformed");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(problem.lower[i] <= problem.upper[i])) {
            throw InvalidParameter("lower bound exceeds upper bound");
        }
    }
    if (config.restarts < 1) throw InvalidParameter("restarts must be at least 1");
    if (!(config.initial_step > 0.0 && config.min_step > 0.0 && config.shrink > 0.0 &&
          config.shrink < 1.0)) {
        throw InvalidParameter("step schedule is malformed");
    }
    if (!problem.evaluate) throw InvalidParameter("problem has no evaluator");

    OptResult result;
    result.restarts = config.restarts;
    result.seed = config.seed;
    LocalSearch search(problem, config);

    auto consider = [&](std::vector<double> x) {
        const Evaluation e = search.run(x);
        if (!feasible(e)) return;
        if (!result.feasible || e.objective > result.value) {
            result.feasible = true;
            result.value = e.objective;
            result.argmax = std::move(x);
        }
    };

    for (const auto& w : problem.warm_starts) {
        if (w.size() != n) throw InvalidParameter("warm start has the wrong dimension");
        consider(w);
    }
    for (int r = 0; r < config.restarts; ++r) {
        std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                          static_cast<std::uint32_t>(config.seed >> 32),
                          static_cast<std::uint32_t>(r)};
        std::mt19937_64 rng(seq);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::uniform_real_distribution<double>(problem.lower[i], problem.upper[i])(rng);
        }
        consider(std::move(x));
    }
    if (!result.feasible) result.value = 0.0;
    return result;
}

GridResult grid_refine(const std::function<double(std::span<const double>)>& evaluator,
                       std::span<const double> lower, std::span<const double> upper,
                       const GridConfig& config) {
    const std::size_t n = lower.size();
    if (n == 0 || upper.size() != n) throw InvalidParameter("box bounds are malformed");
    if (!(config.coarse_step > 0.0)) throw InvalidParameter("grid step must be positive");
    if (config.refine_rounds < 0) throw InvalidParameter("refine_rounds must be non-negative");

    std::vector<std::vector<double>> axes(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(lower[i] <= upper[i])) throw InvalidParameter("lower bound exceeds upper bound");
        const double span = upper[i] - lower[i];
        const auto steps = static_cast<long>(std::floor(span / config.coarse_step + 1e-9));
        for (long k = 0; k <= steps; ++k) axes[i].push_back(lower[i] + k * config.coarse_step);
        if (upper[i] - axes[i].back() > 1e-9) axes[i].push_back(upper[i]);
        axes[i].back() = std::min(axes[i].back(), upper[i]);
    }

    GridResult best;
    best.value = -std::numeric_limits<double>::infinity();
    std::vector<double> x(n);

    // Visit the tensor grid of axes in lexicographic order.
    auto sweep = [&](const std::vector<std::vector<double>>& ax) {
        std::vector<std::size_t> idx(n, 0);
        for (;;) {
            for (std::size_t i = 0; i < n; ++i) x[i] = ax[i][idx[i]];
            const double v = evaluator(x);
            if (v > best.value) {
                best.value = v;
                best.point = x;
                best.found = true;
            }
            std::size_t d = n;
            while (d > 0) {
                --d;
                if (++idx[d] < ax[d].size()) break;
                idx[d] = 0;
                if (d == 0) return;
            }
        }
    };

    sweep(axes);
    if (!best.found) {
        best.point.assign(lower.begin(), lower.end());
        return best;
    }

    double h = config.coarse_step;
    for (int round = 0; round < config.refine_rounds; ++round) {
        h *= 0.5;
        const std::vector<double> centre = best.point;
        std::vector<std::vector<double>> local(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (int k = -2; k <= 2; ++k) {
                const double v = std::clamp(centre[i] + k * h, lower[i], upper[i]);
                if (local[i].empty() || v > local[i].back()) local[i].push_back(v);
            }
        }
        sweep(local);
    }
    return best;
}

} // namespace coopstab
