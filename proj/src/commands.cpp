#include "coopstab/commands.hpp"

#include "coopstab/error.hpp"
#include "coopstab/ra_analysis.hpp"
#include "coopstab/special_cases.hpp"
#include "coopstab/tdma_analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <random>

namespace coopstab {

namespace {

constexpr double kOrderTol = 1e-6;
constexpr double kMonotoneTol = 1e-9;

constexpr std::array<const char*, 6> kQuantities = {"mu_p",  "lambda_ps", "lambda_sd",
                                                    "mu_s",  "mu_ps",     "mu_sd"};

struct NamedRates {
    std::string system;
    std::array<std::optional<double>, 6> values;
};

NamedRates named(std::string system, const RaRates& r) {
    return {std::move(system), {r.mu_p, r.lambda_ps, r.lambda_sd, r.mu_s, r.mu_ps, r.mu_sd}};
}

NamedRates named(std::string system, const SpecialCaseRates& r) {
    return {std::move(system), {r.mu_p, r.lambda_ps, 0.0, r.mu_s, r.mu_ps, std::nullopt}};
}

std::vector<NamedRates> analytic_rates(Variant v, const LinkProbabilities& link, double lambda_p,
                                       const PolicyVariant& policy) {
    std::vector<NamedRates> out;
    if (v == Variant::tdma) {
        out.push_back(named("tdma", tdma_rates(link, lambda_p, std::get<TdmaPolicy>(policy))));
        return out;
    }
    const RaPolicy& p = std::get<RaPolicy>(policy);
    switch (v) {
    case Variant::ra:
        out.push_back(named("S1", dominant1_rates(link, lambda_p, p)));
        out.push_back(named("S2", dominant2_rates(link, lambda_p, p)));
        out.push_back(named("O1", outer1_rates(link, lambda_p, p)));
        break;
    case Variant::dominant1: out.push_back(named("S1", dominant1_rates(link, lambda_p, p))); break;
    case Variant::dominant2: out.push_back(named("S2", dominant2_rates(link, lambda_p, p))); break;
    case Variant::priority:
        out.push_back(named("priority", priority_rates(link, lambda_p, p.admission.f_s)));
        break;
    case Variant::nonpriority:
        out.push_back(named("nonpriority", nonpriority_rates(link, lambda_p, p.admission.f_s,
                                                             p.alpha_s, p.alpha_sp)));
        break;
    case Variant::strong_mpr:
        out.push_back(named("strong_mpr", strong_mpr_rates(link, lambda_p, p.admission).rates));
        break;
    case Variant::no_coop: out.push_back(named("no_coop", priority_rates(link, lambda_p, 0.0))); break;
    case Variant::tdma: break;
    }
    return out;
}

// Analytic system whose every rate the simulator reproduces; the generic
// primary-side rates (first three) match for every variant.
std::optional<std::string> matching_system(Variant v) {
    switch (v) {
    case Variant::dominant1: return "S1";
    case Variant::dominant2: return "S2";
    case Variant::tdma: return "tdma";
    case Variant::priority: return "priority";
    case Variant::nonpriority: return "nonpriority";
    default: return std::nullopt;
    }
}

RateEstimate simulated(const SimReport& r, std::size_t quantity) {
    switch (quantity) {
    case 0: return r[QueueId::p].service;
    case 1: return r[QueueId::ps].arrival;
    case 2: return r[QueueId::sd].arrival;
    case 3: return r[QueueId::s].service;
    case 4: return r[QueueId::ps].service;
    case 5: return r[QueueId::sd].service;
    }
    return {};
}

bool is_simulatable(Variant v) { return v != Variant::no_coop; }

const RegionCurve* find_curve(std::span<const RegionCurve> curves, Variant v, BoundKind k) {
    for (const RegionCurve& c : curves) {
        if (c.variant == v && c.bound == k) return &c;
    }
    return nullptr;
}

std::string curve_name(const RegionCurve& c) {
    return std::string(to_string(c.variant)) + "/" + std::string(to_string(c.bound));
}

// Largest amount by which a exceeds b + tol; <= 0 when a <= b everywhere.
CheckResult compare_le(std::string name, const RegionCurve& a, const RegionCurve& b, double tol) {
    CheckResult r{std::move(name), CheckResult::Status::pass, {}};
    double worst = -std::numeric_limits<double>::infinity();
    double at = 0.0;
    const std::size_t n = std::min(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a.points[i].lambda_s_max - b.points[i].lambda_s_max;
        if (d > worst) {
            worst = d;
            at = a.points[i].lambda_p;
        }
    }
    if (worst > tol) r.status = CheckResult::Status::fail;
    r.detail = "max excess " + format_number(std::max(worst, 0.0)) + " at lambda_p=" + format_number(at);
    return r;
}

void write_check(std::ostream& out, const CheckResult& c) {
    out << c.name << ',' << to_string(c.status) << ',' << c.detail << '\n';
}

std::vector<double> rate_grid(const Range& r) {
    return lambda_grid(r.start, *r.stop, r.step);
}

RaPolicy no_relay_policy() {
    RaPolicy p;
    p.alpha_s = 1.0;
    return p;
}

RaOptimum best_of(const RaOptimum& a, const RaOptimum& b) {
    if (a.feasible != b.feasible) return a.feasible ? a : b;
    return a.value >= b.value ? a : b;
}

} // namespace

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
}

std::string_view to_string(CheckResult::Status s) {
    switch (s) {
    case CheckResult::Status::pass: return "pass";
    case CheckResult::Status::fail: return "fail";
    case CheckResult::Status::skip: return "skip";
    }
    return "?";
}

Scenario apply_overrides(Scenario sc, const CommandOptions& opt) {
    if (opt.variant) {
        sc.variant = *opt.variant;
        sc.region_variants = {*opt.variant};
    }
    if (opt.bound) sc.bounds = {*opt.bound};
    if (opt.lambda_p) {
        if (!(*opt.lambda_p >= 0.0 && *opt.lambda_p <= 1.0)) {
            throw ConfigError("--lambda-p must lie in [0,1]");
        }
        sc.lambda_p = *opt.lambda_p;
    }
    if (opt.grid_step) {
        if (!(*opt.grid_step > 0.0)) throw ConfigError("--grid-step must be positive");
        sc.lambda_sweep.step = *opt.grid_step;
    }
    if (opt.seed) {
        sc.optimizer.seed = *opt.seed;
        sc.sim.seed = *opt.seed;
    }
    if (opt.restarts) {
        if (*opt.restarts < 1) throw ConfigError("--restarts must be at least 1");
        sc.optimizer.restarts = *opt.restarts;
    }
    return sc;
}

std::vector<RegionCurve> compute_region(const LinkProbabilities& link,
                                        std::span<const Variant> variants,
                                        std::span<const BoundKind> bounds,
                                        std::span<const double> grid, const OptConfig& opt,
                                        const GridConfig& grid_config) {
    static constexpr std::array<BoundKind, 6> kAllBounds = {
        BoundKind::inner_S1, BoundKind::inner_S2, BoundKind::outer_O1,
        BoundKind::outer_O2, BoundKind::inner_union, BoundKind::outer_intersection};
    std::vector<BoundKind> ra_bounds(bounds.begin(), bounds.end());
    if (ra_bounds.empty()) ra_bounds.assign(kAllBounds.begin(), kAllBounds.end());

    std::optional<InnerBoundCurves> inner;
    std::optional<OuterBoundCurves> outer;
    auto need_inner = [&]() -> const InnerBoundCurves& {
        if (!inner) inner = inner_bound_curve(link, grid, opt);
        return *inner;
    };
    auto need_outer = [&]() -> const OuterBoundCurves& {
        if (!outer) outer = outer_bound_curve(link, grid, opt, &need_inner());
        return *outer;
    };

    std::vector<RegionCurve> out;
    for (Variant v : variants) {
        switch (v) {
        case Variant::ra:
            for (BoundKind k : ra_bounds) {
                switch (k) {
                case BoundKind::inner_S1: out.push_back(need_inner().s1); break;
                case BoundKind::inner_S2: out.push_back(need_inner().s2); break;
                case BoundKind::inner_union: out.push_back(need_inner().combined); break;
                case BoundKind::outer_O1: out.push_back(need_outer().o1); break;
                case BoundKind::outer_O2: out.push_back(need_outer().o2); break;
                case BoundKind::outer_intersection: out.push_back(need_outer().combined); break;
                case BoundKind::exact:
                    throw ConfigError("bound kind exact does not apply to variant ra");
                }
            }
            break;
        case Variant::dominant1: {
            RegionCurve c = need_inner().s1;
            c.variant = Variant::dominant1;
            out.push_back(std::move(c));
            break;
        }
        case Variant::dominant2: {
            RegionCurve c = need_inner().s2;
            c.variant = Variant::dominant2;
            out.push_back(std::move(c));
            break;
        }
        case Variant::tdma: out.push_back(tdma_curve(link, grid, grid_config)); break;
        case Variant::priority: out.push_back(priority_curve(link, grid)); break;
        case Variant::nonpriority: out.push_back(nonpriority_curve(link, grid)); break;
        case Variant::strong_mpr: out.push_back(strong_mpr_curve(link, grid, grid_config)); break;
        case Variant::no_coop: out.push_back(no_coop_curve(link, grid)); break;
        }
    }
    return out;
}

std::vector<CheckResult> check_region(std::span<const RegionCurve> curves) {
    std::vector<CheckResult> out;
    const RegionCurve* in = find_curve(curves, Variant::ra, BoundKind::inner_union);
    const RegionCurve* ou = find_curve(curves, Variant::ra, BoundKind::outer_intersection);
    if (in && ou) out.push_back(compare_le("inner_le_outer", *in, *ou, kOrderTol));
    const RegionCurve* o1 = find_curve(curves, Variant::ra, BoundKind::outer_O1);
    const RegionCurve* o2 = find_curve(curves, Variant::ra, BoundKind::outer_O2);
    if (o1 && o2) out.push_back(compare_le("outer1_le_outer2", *o1, *o2, kOrderTol));

    const RegionCurve* p = find_curve(curves, Variant::priority, BoundKind::exact);
    const RegionCurve* np = find_curve(curves, Variant::nonpriority, BoundKind::exact);
    if (p && np) {
        CheckResult r{"priority_equals_nonpriority", CheckResult::Status::pass, {}};
        double worst = 0.0;
        for (std::size_t i = 0; i < std::min(p->points.size(), np->points.size()); ++i) {
            worst = std::max(worst, std::abs(p->points[i].lambda_s_max - np->points[i].lambda_s_max));
        }
        if (worst > 1e-3) r.status = CheckResult::Status::fail;
        r.detail = "max gap " + format_number(worst);
        out.push_back(r);
    }
    for (const RegionCurve& c : curves) {
        const double inc = max_increase(c);
        out.push_back({"monotone " + curve_name(c),
                       inc > kMonotoneTol ? CheckResult::Status::fail : CheckResult::Status::pass,
                       "max increase " + format_number(inc)});
    }
    return out;
}

void write_region_csv(std::ostream& out, std::span<const RegionCurve> curves) {
    out << "variant,bound_kind,lambda_p,lambda_s_max,f_s,f_sd,keep,alpha_s,alpha_sp,alpha_sd,"
           "omega,alpha,feasible\n";
    for (const RegionCurve& c : curves) {
        for (const RegionPoint& pt : c.points) {
            const PolicyPoint& a = pt.argmax;
            out << to_string(c.variant) << ',' << to_string(c.bound) << ','
                << format_number(pt.lambda_p) << ',' << format_number(pt.lambda_s_max) << ','
                << format_optional(a.f_s) << ',' << format_optional(a.f_sd) << ','
                << (a.keep ? std::string(to_string(*a.keep)) : std::string()) << ','
                << format_optional(a.alpha_s) << ',' << format_optional(a.alpha_sp) << ','
                << format_optional(a.alpha_sd) << ',' << format_optional(a.omega) << ','
                << format_optional(a.alpha) << ',' << (pt.feasible ? "true" : "false") << '\n';
        }
    }
}

std::vector<RateSweepRow> rate_sweep(const PhyParams& phy, double lambda_p,
                                     std::span<const double> rates, const OptConfig& opt,
                                     const GridConfig& grid_config) {
    std::vector<std::array<RateSweepRow, 3>> rows(rates.size());
    std::optional<RaPolicy> prev_mu, prev_ls;
    // Worst links first; each argmax seeds the next, easier, point.
    for (std::size_t k = rates.size(); k-- > 0;) {
        const double R = rates[k];
        const LinkProbabilities link = build_link_probabilities(phy.with_spectral_rate(R));

        const TdmaOptimum tp = tdma_max_primary(link, lambda_p, grid_config);
        const TdmaOptimum ts = tdma_max_secondary(link, lambda_p, grid_config);
        rows[k][0] = {Variant::tdma, R, tp.value, ts.feasible ? ts.value : 0.0, ts.feasible};

        std::vector<RaPolicy> mu_seeds{no_relay_policy()};
        if (prev_mu) mu_seeds.push_back(*prev_mu);
        const RaOptimum mu = best_of(
            optimize_ra(RaSystem::dominant1, link, lambda_p, opt, mu_seeds,
                        RaObjective::primary_service),
            optimize_ra(RaSystem::dominant2, link, lambda_p, opt, mu_seeds,
                        RaObjective::primary_service));
        std::vector<RaPolicy> ls_seeds;
        if (auto np = nonpriority_optimal(link, lambda_p); np.feasible) {
            RaPolicy s;
            s.alpha_s = np.alpha_s;
            s.alpha_sp = np.alpha_sp;
            s.admission = {np.f_s, 0.0, KeepPriority::receiver};
            ls_seeds.push_back(s);
        }
        if (prev_ls) ls_seeds.push_back(*prev_ls);
        const RaOptimum ls =
            best_of(optimize_ra(RaSystem::dominant1, link, lambda_p, opt, ls_seeds),
                    optimize_ra(RaSystem::dominant2, link, lambda_p, opt, ls_seeds));
        if (mu.feasible) prev_mu = mu.policy;
        if (ls.feasible) prev_ls = ls.policy;
        rows[k][1] = {Variant::ra, R, mu.value, ls.feasible ? ls.value : 0.0, ls.feasible};

        const double direct = link.success(Link::p_pd);
        const bool nc_ok = lambda_p == 0.0 || lambda_p <= direct;
        const double nc_ls =
            nc_ok && direct > 0.0 ? (1.0 - lambda_p / direct) * link.success(Link::s_sd) : 0.0;
        rows[k][2] = {Variant::no_coop, R, direct, std::max(0.0, nc_ls), nc_ok && direct > 0.0};
    }
    std::vector<RateSweepRow> out;
    for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

int cmd_rates(const Scenario& base, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
    const Scenario sc = apply_overrides(base, opt);
    const LinkProbabilities link = sc.links();
    const PolicyVariant policy = sc.policy_for(sc.variant);
    const std::vector<NamedRates> rates = analytic_rates(sc.variant, link, sc.lambda_p, policy);

    out << "variant,system,lambda_p,lambda_s,quantity,value,se,delta_se\n";
    const std::string head = std::string(to_string(sc.variant)) + ",";
    const std::string lam = format_number(sc.lambda_p) + "," + format_number(sc.lambda_s) + ",";
    for (const NamedRates& r : rates) {
        for (std::size_t q = 0; q < kQuantities.size(); ++q) {
            out << head << r.system << ',' << lam << kQuantities[q] << ','
                << format_optional(r.values[q]) << ",,\n";
        }
    }
    if (!opt.simulate) return 0;
    if (!is_simulatable(sc.variant)) {
        err << "variant " << to_string(sc.variant) << " has no slot-level model\n";
        return 2;
    }
    SimConfig cfg{sc.variant, link,          sc.lambda_p,  sc.lambda_s, policy,
                  sc.sim.horizon, sc.sim.warmup, sc.sim.replicas, sc.sim.seed};
    const SimReport rep = run(cfg);
    const auto match = matching_system(sc.variant);
    const NamedRates* ref = nullptr;
    for (const NamedRates& r : rates) {
        if (match && r.system == *match) ref = &r;
    }
    if (!ref && !rates.empty()) ref = &rates.front();
    for (std::size_t q = 0; q < kQuantities.size(); ++q) {
        const RateEstimate e = simulated(rep, q);
        std::string delta;
        const bool comparable = ref && ref->values[q] && e.defined && (q < 3 || match);
        if (comparable && e.se > 0.0) delta = format_number((e.mean - *ref->values[q]) / e.se);
        out << head << "simulated," << lam << kQuantities[q] << ','
            << (e.defined ? format_number(e.mean) : std::string()) << ','
            << (e.defined && std::isfinite(e.se) ? format_number(e.se) : std::string()) << ','
            << delta << '\n';
    }
    return 0;
}

int cmd_region(const Scenario& base, const CommandOptions& opt, std::ostream& out,
               std::ostream& err) {
    const Scenario sc = apply_overrides(base, opt);
    const LinkProbabilities link = sc.links();
    const std::vector<double> grid = sc.lambda_grid();
    const std::vector<RegionCurve> curves =
        compute_region(link, sc.region_variants, sc.bounds, grid, sc.optimizer, sc.grid);
    int code = 0;
    for (const CheckResult& c : check_region(curves)) {
        if (c.status == CheckResult::Status::fail) {
            err << "check failed: " << c.name << " (" << c.detail << ")\n";
            if (c.name.rfind("monotone", 0) == 0) code = 3;
        }
    }
    // Curves that are not monotone are not written.
    if (code != 0) return code;
    write_region_csv(out, curves);
    return 0;
}

int cmd_sweep_rate(const Scenario& base, const CommandOptions& opt, std::ostream& out,
                   std::ostream& err) {
    const Scenario sc = apply_overrides(base, opt);
    if (!sc.phy) {
        err << "sweep-rate needs a phy section; an explicit link table has no spectral rate\n";
        return 2;
    }
    if (!sc.rate_sweep) {
        err << "sweep-rate needs sweep.spectral_rate\n";
        return 2;
    }
    const std::vector<double> rates = rate_grid(*sc.rate_sweep);
    const auto rows = rate_sweep(*sc.phy, sc.lambda_p, rates, sc.optimizer, sc.grid);
    out << "variant,spectral_rate,lambda_p,max_mu_p,max_lambda_s,feasible\n";
    for (const RateSweepRow& r : rows) {
        out << to_string(r.variant) << ',' << format_number(r.spectral_rate) << ','
            << format_number(sc.lambda_p) << ',' << format_number(r.max_mu_p) << ','
            << format_number(r.max_lambda_s) << ',' << (r.feasible ? "true" : "false") << '\n';
    }
    return 0;
}

int cmd_simulate(const Scenario& base, const CommandOptions& opt, std::ostream& out,
                 std::ostream& err) {
    const Scenario sc = apply_overrides(base, opt);
    if (!is_simulatable(sc.variant)) {
        err << "variant " << to_string(sc.variant) << " has no slot-level model\n";
        return 2;
    }
    SimConfig cfg{sc.variant,     sc.links(),    sc.lambda_p,     sc.lambda_s, sc.policy_for(sc.variant),
                  sc.sim.horizon, sc.sim.warmup, sc.sim.replicas, sc.sim.seed};
    const SimReport rep = run(cfg);
    auto est = [](const RateEstimate& e, bool with_se) {
        if (!e.defined) return std::string(",");
        std::string s = format_number(e.mean) + ",";
        if (with_se && std::isfinite(e.se)) s += format_number(e.se);
        return s;
    };
    out << "variant,queue,arrival,arrival_se,service,service_se,hol_service,hol_service_se,"
           "drift_per_1e4,drift_se,final_length,verdict\n";
    for (QueueId q : kAllQueues) {
        const QueueReport& r = rep[q];
        out << to_string(sc.variant) << ',' << to_string(q) << ',' << est(r.arrival, true) << ','
            << est(r.service, true) << ',' << est(r.hol_service, true) << ','
            << est(r.drift, true) << ',' << format_number(r.final_length) << ','
            << to_string(r.verdict) << '\n';
    }
    out << to_string(sc.variant) << ",all,,,,,,,,,," << to_string(rep.verdict) << '\n';
    return 0;
}

int cmd_validate(const std::string& path, const CommandOptions& opt, std::ostream& out,
                 std::ostream& err) {
    out << "check,status,detail\n";
    std::optional<Scenario> loaded;
    try {
        loaded = load_scenario(path);
    } catch (const ConsistencyError& e) {
        write_check(out, {"link_consistency", CheckResult::Status::fail, e.what()});
        return 1;
    }
    const Scenario sc = apply_overrides(*loaded, opt);
    const LinkProbabilities link = sc.links();
    std::vector<CheckResult> checks;
    checks.push_back({"link_consistency", CheckResult::Status::pass, "interfered <= direct"});

    // Primary-side identities over an admission grid.
    {
        double mu_gap = 0.0, flow_gap = 0.0;
        for (double fs = 0.0; fs <= 1.0 + 1e-12; fs += 0.125) {
            for (double fsd = 0.0; fsd <= 1.0 + 1e-12; fsd += 0.125) {
                const double mu = primary_service_rate(link, fs, fsd).mu_p;
                const RelayArrivals a1 =
                    relaying_arrival_rates(link, 0.0, mu, {fs, fsd, KeepPriority::receiver});
                const double lp = std::min(sc.lambda_p, mu);
                const RelayArrivals r1 =
                    mu > 0.0 ? relaying_arrival_rates(link, lp, mu, {fs, fsd, KeepPriority::receiver})
                             : a1;
                const RelayArrivals r0 =
                    mu > 0.0
                        ? relaying_arrival_rates(link, lp, mu, {fs, fsd, KeepPriority::transmitter})
                        : a1;
                const double gain = primary_service_rate(link, fs, fsd).cooperation_gain;
                const double total = mu > 0.0 ? lp / mu * gain : 0.0;
                flow_gap = std::max({flow_gap, std::abs(r1.lambda_ps + r1.lambda_sd - total),
                                     std::abs(r0.lambda_ps + r0.lambda_sd - total)});
                mu_gap = std::max(mu_gap, std::abs(mu - link.success(Link::p_pd) - gain));
            }
        }
        checks.push_back({"mu_p_decomposition",
                          mu_gap <= 1e-12 ? CheckResult::Status::pass : CheckResult::Status::fail,
                          "max gap " + format_number(mu_gap)});
        checks.push_back({"relayed_flow_keep_invariance",
                          flow_gap <= 1e-12 ? CheckResult::Status::pass : CheckResult::Status::fail,
                          "max gap " + format_number(flow_gap)});
    }

    // Outer-bound rates dominate both dominant systems for random policies.
    {
        std::mt19937_64 rng(sc.optimizer.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int bad = 0;
        for (int i = 0; i < 500; ++i) {
            RaPolicy p;
            const double a = u(rng), b = u(rng);
            p.alpha_s = std::min(a, b);
            p.alpha_sp = std::max(a, b) - p.alpha_s;
            p.alpha_sd = u(rng);
            p.admission = {u(rng), u(rng), u(rng) < 0.5 ? KeepPriority::receiver
                                                        : KeepPriority::transmitter};
            const double lp = u(rng) * link.max_primary_service();
            const RaRates o = ra_rates(RaSystem::outer1, link, lp, p);
            for (RaSystem s : {RaSystem::dominant1, RaSystem::dominant2}) {
                const RaRates d = ra_rates(s, link, lp, p);
                if (d.mu_s > o.mu_s + 1e-12 || d.mu_ps > o.mu_ps + 1e-12 ||
                    d.mu_sd > o.mu_sd + 1e-12) {
                    ++bad;
                }
            }
        }
        checks.push_back({"outer_rates_dominate",
                          bad == 0 ? CheckResult::Status::pass : CheckResult::Status::fail,
                          std::to_string(bad) + " violations in 500 policies"});
    }

    // Region checks.
    const std::vector<double> grid = sc.lambda_grid();
    const bool strong = link.is_strong_mpr(1e-9);
    std::vector<Variant> variants{Variant::ra, Variant::tdma, Variant::priority,
                                  Variant::nonpriority};
    if (strong) variants.push_back(Variant::strong_mpr);
    const std::array<BoundKind, 6> bounds = {BoundKind::inner_S1, BoundKind::inner_S2,
                                             BoundKind::inner_union, BoundKind::outer_O1,
                                             BoundKind::outer_O2, BoundKind::outer_intersection};
    const std::vector<RegionCurve> curves =
        compute_region(link, variants, bounds, grid, sc.optimizer, sc.grid);
    for (CheckResult& c : check_region(curves)) checks.push_back(std::move(c));

    const RegionCurve* tdma = find_curve(curves, Variant::tdma, BoundKind::exact);
    const RegionCurve* inner = find_curve(curves, Variant::ra, BoundKind::inner_union);
    const RegionCurve* prio = find_curve(curves, Variant::priority, BoundKind::exact);
    const RegionCurve* np = find_curve(curves, Variant::nonpriority, BoundKind::exact);
    if (strong) {
        const RegionCurve* mpr = find_curve(curves, Variant::strong_mpr, BoundKind::exact);
        checks.push_back(compare_le("strong_mpr_ge_tdma", *tdma, *mpr, kOrderTol));
    } else {
        checks.push_back(compare_le("tdma_ge_ra_inner", *inner, *tdma, kOrderTol));
    }
    checks.push_back(compare_le("ra_inner_ge_priority", *prio, *inner, kOrderTol));
    checks.push_back(compare_le("ra_inner_ge_nonpriority", *np, *inner, kOrderTol));

    // The prioritized boundary is one affine piece over its feasible range.
    {
        std::vector<double> xs, ys;
        for (const RegionPoint& pt : prio->points) {
            if (pt.feasible && pt.lambda_s_max > 0.0) {
                xs.push_back(pt.lambda_p);
                ys.push_back(pt.lambda_s_max);
            }
        }
        CheckResult r{"priority_affine", CheckResult::Status::skip, "fewer than 3 points"};
        if (xs.size() >= 3) {
            const double slope = (ys.back() - ys.front()) / (xs.back() - xs.front());
            double worst = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                worst = std::max(worst, std::abs(ys.front() + slope * (xs[i] - xs.front()) - ys[i]));
            }
            r.status = worst <= 1e-9 ? CheckResult::Status::pass : CheckResult::Status::fail;
            r.detail = "max residual " + format_number(worst);
        }
        checks.push_back(r);
    }

    // TDMA boundary is where the optimal split stops fitting in a slot.
    {
        CheckResult r{"tdma_boundary_split", CheckResult::Status::skip, "no cooperation feasible"};
        const Admission a{1.0, 1.0, KeepPriority::receiver};
        const double lp = std::min(sc.lambda_p, 0.5 * primary_service_rate(link, 1, 1).mu_p);
        const BoundValue b = tdma_region_boundary(link, lp, a);
        if (b.feasible && b.value > 0.0) {
            double lo = 0.0, hi = std::min(1.0, b.value * 2.0 + 1e-3);
            for (int i = 0; i < 80; ++i) {
                const double mid = 0.5 * (lo + hi);
                (tdma_optimal_split(link, lp, mid, a).feasible ? lo : hi) = mid;
            }
            const double gap = std::abs(lo - b.value);
            r.status = gap <= 1e-6 ? CheckResult::Status::pass : CheckResult::Status::fail;
            r.detail = "gap " + format_number(gap) + " at lambda_p=" + format_number(lp);
        }
        checks.push_back(r);
    }

    // Optimal alpha_s never grows with f_s when lambda_p < Pbar_{p,pd}.
    {
        CheckResult r{"alpha_s_monotone", CheckResult::Status::skip,
                      "needs 0 < lambda_p < Pbar_{p,pd}"};
        if (sc.lambda_p > 0.0 && sc.lambda_p < link.success(Link::p_pd)) {
            const std::vector<double> fs = lambda_grid(0.0, 1.0, 1.0 / 199.0);
            const MonotonicityVerdict v = alpha_monotonicity_check(link, sc.lambda_p, fs);
            r.status = v.holds() ? CheckResult::Status::pass : CheckResult::Status::fail;
            r.detail = "max derivative " + format_number(v.max_derivative);
        }
        checks.push_back(r);
    }

    // Slot simulation of the scenario's own system.
    {
        CheckResult r{"simulation_within_3se", CheckResult::Status::skip, "not simulated"};
        if (is_simulatable(sc.variant) && sc.variant != Variant::strong_mpr) {
            const PolicyVariant policy = sc.policy_for(sc.variant);
            const std::vector<NamedRates> rates = analytic_rates(sc.variant, link, sc.lambda_p, policy);
            const auto match = matching_system(sc.variant);
            SimConfig cfg{sc.variant,     link,          sc.lambda_p,     sc.lambda_s, policy,
                          sc.sim.horizon, sc.sim.warmup, sc.sim.replicas, sc.sim.seed};
            const SimReport rep = run(cfg);
            const NamedRates& ref = rates.front();
            double worst = 0.0;
            int compared = 0;
            for (std::size_t q = 0; q < kQuantities.size(); ++q) {
                if (q >= 3 && !match) continue;
                const RateEstimate e = simulated(rep, q);
                if (!ref.values[q] || !e.defined || !std::isfinite(e.se)) continue;
                const double diff = std::abs(e.mean - *ref.values[q]);
                const double z = e.se > 0.0 ? diff / e.se : (diff > 1e-12 ? INFINITY : 0.0);
                worst = std::max(worst, z);
                ++compared;
            }
            if (compared > 0) {
                r.status = worst <= 3.0 ? CheckResult::Status::pass : CheckResult::Status::fail;
                r.detail = std::to_string(compared) + " rates; max |z| " + format_number(worst);
            }
        }
        checks.push_back(r);
    }

    int failures = 0;
    for (const CheckResult& c : checks) {
        write_check(out, c);
        if (c.status == CheckResult::Status::fail) ++failures;
    }
    if (failures > 0) err << failures << " check(s) failed\n";
    return failures > 0 ? 1 : 0;
}

} // namespace coopstab
