// coopstab: stability regions of a cooperative cognitive radio link.
//
// Exit codes: 0 ok, 1 validation failures, 2 bad input, 3 non-monotone
// region curve, 4 internal error.

#include "coopstab/commands.hpp"
#include "coopstab/error.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct Args {
    std::string scenario;
    std::string out;
    std::string variant;
    std::string bound;
    double lambda_p = -1.0;
    double grid_step = -1.0;
    std::uint64_t seed = 0;
    int restarts = 0;
    bool simulate = false;
};

bool given(const CLI::App& sub, const std::string& name) {
    const CLI::Option* opt = sub.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

coopstab::CommandOptions to_options(const Args& a, const CLI::App& sub) {
    coopstab::CommandOptions o;
    if (given(sub, "--variant")) o.variant = coopstab::parse_variant(a.variant);
    if (given(sub, "--bound")) o.bound = coopstab::parse_bound(a.bound);
    if (given(sub, "--lambda-p")) o.lambda_p = a.lambda_p;
    if (given(sub, "--grid-step")) o.grid_step = a.grid_step;
    if (given(sub, "--seed")) o.seed = a.seed;
    if (given(sub, "--restarts")) o.restarts = a.restarts;
    o.simulate = a.simulate;
    return o;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stability regions of a cooperative cognitive radio link"};
    app.require_subcommand(1);
    Args args;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", args.scenario, "scenario JSON file")->required();
        sub->add_option("--out", args.out, "write CSV here instead of stdout");
        sub->add_option("--seed", args.seed, "seed for optimizer and simulator");
    };
    auto add_variant = [&](CLI::App* sub) {
        sub->add_option("--variant", args.variant,
                        "ra|dominant1|dominant2|tdma|priority|nonpriority|strong_mpr|no_coop");
    };

    CLI::App* rates = app.add_subcommand("rates", "analytic (and simulated) queue rates");
    add_common(rates);
    add_variant(rates);
    rates->add_option("--lambda-p", args.lambda_p, "primary arrival rate");
    rates->add_flag("--simulate", args.simulate, "also run the slot simulator");

    CLI::App* region = app.add_subcommand("region", "stability region boundaries");
    add_common(region);
    add_variant(region);
    region->add_option("--bound", args.bound,
                       "inner_S1|inner_S2|inner_union|outer_O1|outer_O2|outer_intersection");
    region->add_option("--grid-step", args.grid_step, "lambda_p grid step");
    region->add_option("--restarts", args.restarts, "optimizer restarts");

    CLI::App* sweep = app.add_subcommand("sweep-rate", "throughput against spectral rate");
    add_common(sweep);
    sweep->add_option("--lambda-p", args.lambda_p, "primary arrival rate");
    sweep->add_option("--restarts", args.restarts, "optimizer restarts");

    CLI::App* simulate = app.add_subcommand("simulate", "slot-level simulation");
    add_common(simulate);
    add_variant(simulate);
    simulate->add_option("--lambda-p", args.lambda_p, "primary arrival rate");

    CLI::App* validate = app.add_subcommand("validate", "run the consistency checks");
    add_common(validate);
    validate->add_option("--grid-step", args.grid_step, "lambda_p grid step");
    validate->add_option("--restarts", args.restarts, "optimizer restarts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    std::ostringstream out;
    int code = 0;
    try {
        const coopstab::CommandOptions opt = to_options(args, *sub);
        if (sub == validate) {
            code = coopstab::cmd_validate(args.scenario, opt, out, std::cerr);
        } else {
            const coopstab::Scenario sc = coopstab::load_scenario(args.scenario);
            if (sub == rates) code = coopstab::cmd_rates(sc, opt, out, std::cerr);
            else if (sub == region) code = coopstab::cmd_region(sc, opt, out, std::cerr);
            else if (sub == sweep) code = coopstab::cmd_sweep_rate(sc, opt, out, std::cerr);
            else code = coopstab::cmd_simulate(sc, opt, out, std::cerr);
        }
    } catch (const coopstab::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }

    if (args.out.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream f(args.out, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write " << args.out << '\n';
            return 2;
        }
        f << out.str();
    }
    return code;
}
