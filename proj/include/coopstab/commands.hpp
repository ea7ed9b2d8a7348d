#pragma once

#include "coopstab/optimizer.hpp"
#include "coopstab/phy.hpp"
#include "coopstab/region.hpp"
#include "coopstab/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coopstab {

// Numbers in every CSV: 9 significant digits, "%.9g".
std::string format_number(double v);
std::string format_optional(const std::optional<double>& v);

// Command-line overrides of scenario fields.
struct CommandOptions {
    std::optional<Variant> variant;
    std::optional<BoundKind> bound;
    std::optional<double> lambda_p;
    std::optional<double> grid_step;
    std::optional<std::uint64_t> seed;
    std::optional<int> restarts;
    bool simulate = false;
};

Scenario apply_overrides(Scenario sc, const CommandOptions& opt);

// Curves for the requested variants, in request order; RA contributes one
// curve per requested bound kind (all six by default).
std::vector<RegionCurve> compute_region(const LinkProbabilities& link,
                                        std::span<const Variant> variants,
                                        std::span<const BoundKind> bounds,
                                        std::span<const double> grid, const OptConfig& opt,
                                        const GridConfig& grid_config);

struct CheckResult {
    std::string name;
    enum class Status { pass, fail, skip } status = Status::pass;
    std::string detail;
};
std::string_view to_string(CheckResult::Status s);

// In-line checks on a set of curves: containment of the RA bounds,
// coincidence of the two f_sd = 0 systems, monotonicity of every curve.
std::vector<CheckResult> check_region(std::span<const RegionCurve> curves);

void write_region_csv(std::ostream& out, std::span<const RegionCurve> curves);

struct RateSweepRow {
    Variant variant = Variant::ra;
    double spectral_rate = 0.0;
    double max_mu_p = 0.0;
    double max_lambda_s = 0.0;
    bool feasible = false;
};

// Per spectral rate: link probabilities rebuilt from phy, then the largest
// primary service rate (relaying queues stable, lambda_s = 0) and the
// largest secondary throughput at lambda_p, for TDMA, RA inner bound and no
// cooperation. Rows are grouped by rate in ascending order.
std::vector<RateSweepRow> rate_sweep(const PhyParams& phy, double lambda_p,
                                     std::span<const double> rates, const OptConfig& opt,
                                     const GridConfig& grid_config);

int cmd_rates(const Scenario& sc, const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_region(const Scenario& sc, const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_sweep_rate(const Scenario& sc, const CommandOptions& opt, std::ostream& out,
                   std::ostream& err);
int cmd_simulate(const Scenario& sc, const CommandOptions& opt, std::ostream& out,
                 std::ostream& err);
// Loads the scenario itself so that an inconsistent link table shows up as
// a failed check rather than a load error.
int cmd_validate(const std::string& scenario_path, const CommandOptions& opt, std::ostream& out,
                 std::ostream& err);

} // namespace coopstab
