#include "coopstab/scenario.hpp"

#include "coopstab/error.hpp"

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace coopstab {

namespace {

using json = nlohmann::json;

void allow_only(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items()) {
        if (!allowed.count(k)) throw ConfigError("unknown key " + where + "." + k);
    }
}

double number(const json& obj, const std::string& where, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

std::optional<double> maybe_number(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    return number(obj, where, key);
}

std::uint64_t count(const json& obj, const std::string& where, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(where + "." + key + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string text(const json& obj, const std::string& where, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
    return v.get<std::string>();
}

OutageTable parse_table(const json& j) {
    allow_only(j, "links", {"p_pd", "p_s", "p_sd", "s_sd", "s_pd", "sd_pd", "s_pd_under_sd",
                            "sd_pd_under_s"});
    OutageTable t;
    for (Link l : kAllLinks) {
        const std::string name(to_string(l));
        if (j.contains(name)) t[l] = number(j, "links", name.c_str());
    }
    for (InterferedLink l : kAllInterferedLinks) {
        const std::string name(to_string(l));
        if (j.contains(name)) t[l] = number(j, "links", name.c_str());
    }
    return t;
}

Node parse_node(const std::string& s, const std::string& where) {
    for (Node n : {Node::p, Node::pd, Node::s, Node::sd}) {
        if (to_string(n) == s) return n;
    }
    throw ConfigError("unknown node '" + s + "' in " + where);
}

PhyParams parse_phy(const json& j) {
    allow_only(j, "phy", {"snr_products", "tx_power", "noise_power", "channel_variance",
                          "packet_bits", "spectral_rate", "slot_duration", "sensing_time",
                          "bandwidth"});
    const double T = j.contains("slot_duration") ? number(j, "phy", "slot_duration") : 1.0;
    const double tau = j.contains("sensing_time") ? number(j, "phy", "sensing_time") : 0.0;
    const double W = j.contains("bandwidth") ? number(j, "phy", "bandwidth") : 1.0;
    if (j.contains("packet_bits") == j.contains("spectral_rate")) {
        throw ConfigError("phy needs exactly one of packet_bits or spectral_rate");
    }
    const double bits = j.contains("packet_bits") ? number(j, "phy", "packet_bits")
                                                  : number(j, "phy", "spectral_rate") * W * T;
    PhyParams phy;
    if (j.contains("snr_products")) {
        if (j.contains("tx_power") || j.contains("noise_power") || j.contains("channel_variance")) {
            throw ConfigError("phy.snr_products excludes tx_power, noise_power and channel_variance");
        }
        const json& s = j.at("snr_products");
        allow_only(s, "phy.snr_products", {"p_pd", "p_s", "p_sd", "s_sd", "s_pd", "sd_pd"});
        std::map<Link, double> snr;
        for (Link l : kAllLinks) {
            const std::string name(to_string(l));
            if (s.contains(name)) snr[l] = number(s, "phy.snr_products", name.c_str());
        }
        phy = PhyParams::from_snr_products(snr, bits, T, tau, W);
    } else {
        for (const char* key : {"tx_power", "noise_power", "channel_variance"}) {
            if (!j.contains(key)) throw ConfigError(std::string("phy.") + key + " is missing");
        }
        const json& tx = j.at("tx_power");
        allow_only(tx, "phy.tx_power", {"p", "s", "sd"});
        for (const auto& [k, v] : tx.items()) {
            phy.tx_power[parse_node(k, "phy.tx_power")] = number(tx, "phy.tx_power", k.c_str());
        }
        const json& nz = j.at("noise_power");
        allow_only(nz, "phy.noise_power", {"pd", "s", "sd"});
        for (const auto& [k, v] : nz.items()) {
            phy.noise_power[parse_node(k, "phy.noise_power")] =
                number(nz, "phy.noise_power", k.c_str());
        }
        const json& cv = j.at("channel_variance");
        allow_only(cv, "phy.channel_variance", {"p_pd", "p_s", "p_sd", "s_sd", "s_pd", "sd_pd"});
        for (Link l : kAllLinks) {
            const std::string name(to_string(l));
            if (cv.contains(name)) {
                phy.channel_variance[{transmitter(l), receiver(l)}] =
                    number(cv, "phy.channel_variance", name.c_str());
            }
        }
        phy.packet_bits = bits;
        phy.slot_duration = T;
        phy.sensing_time = tau;
        phy.bandwidth = W;
    }
    phy.validate();
    return phy;
}

Range parse_range(const json& j, const std::string& where) {
    allow_only(j, where, {"start", "stop", "step"});
    Range r;
    if (j.contains("start")) r.start = number(j, where, "start");
    r.stop = maybe_number(j, where, "stop");
    if (j.contains("step")) r.step = number(j, where, "step");
    if (!(r.step > 0.0)) throw ConfigError(where + ".step must be positive");
    if (r.stop && *r.stop < r.start) throw ConfigError(where + ".stop is below start");
    return r;
}

void check_policy_keys(const PolicyFields& p, Variant v) {
    const bool tdma = v == Variant::tdma;
    if (tdma && (p.alpha_s || p.alpha_sp || p.alpha_sd)) {
        throw ConfigError("variant tdma does not take alpha_s, alpha_sp or alpha_sd");
    }
    if (!tdma && (p.omega || p.alpha)) {
        throw ConfigError("variant " + std::string(to_string(v)) + " does not take omega or alpha");
    }
}

} // namespace

LinkProbabilities Scenario::links() const {
    if (table) return *table;
    return build_link_probabilities(*phy);
}

PolicyVariant Scenario::policy_for(Variant v) const {
    check_policy_keys(policy, v);
    Admission a{policy.f_s.value_or(0.0), policy.f_sd.value_or(0.0),
                policy.keep.value_or(KeepPriority::receiver)};
    if (v == Variant::tdma) {
        TdmaPolicy t{policy.omega.value_or(0.0), policy.alpha.value_or(0.0), a};
        t.validate();
        return t;
    }
    RaPolicy r{policy.alpha_s.value_or(0.0), policy.alpha_sp.value_or(0.0),
               policy.alpha_sd.value_or(0.0), a};
    r.validate();
    return r;
}

std::vector<double> Scenario::lambda_grid() const {
    const double stop = lambda_sweep.stop.value_or(links().max_primary_service());
    return coopstab::lambda_grid(lambda_sweep.start, stop, lambda_sweep.step);
}

Scenario parse_scenario(const std::string& source) {
    json root;
    try {
        root = json::parse(source, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    allow_only(root, "scenario", {"links", "phy", "system", "policy", "sweep", "sim", "optimizer"});
    Scenario sc;
    if (root.contains("links") == root.contains("phy")) {
        throw ConfigError("scenario needs exactly one of links or phy");
    }
    if (root.contains("links")) {
        sc.table = build_link_probabilities(parse_table(root.at("links")));
    } else {
        sc.phy = parse_phy(root.at("phy"));
    }

    if (root.contains("system")) {
        const json& s = root.at("system");
        allow_only(s, "system", {"variant", "region_variants", "bounds"});
        if (s.contains("variant")) sc.variant = parse_variant(text(s, "system", "variant"));
        if (s.contains("region_variants")) {
            for (const json& v : s.at("region_variants")) {
                if (!v.is_string()) throw ConfigError("system.region_variants must hold strings");
                sc.region_variants.push_back(parse_variant(v.get<std::string>()));
            }
        }
        if (s.contains("bounds")) {
            for (const json& b : s.at("bounds")) {
                if (!b.is_string()) throw ConfigError("system.bounds must hold strings");
                sc.bounds.push_back(parse_bound(b.get<std::string>()));
            }
        }
    }
    if (sc.region_variants.empty()) sc.region_variants = {sc.variant};

    if (root.contains("policy")) {
        const json& p = root.at("policy");
        allow_only(p, "policy", {"lambda_p", "lambda_s", "f_s", "f_sd", "keep", "alpha_s",
                                 "alpha_sp", "alpha_sd", "omega", "alpha"});
        if (p.contains("lambda_p")) sc.lambda_p = number(p, "policy", "lambda_p");
        if (p.contains("lambda_s")) sc.lambda_s = number(p, "policy", "lambda_s");
        sc.policy.f_s = maybe_number(p, "policy", "f_s");
        sc.policy.f_sd = maybe_number(p, "policy", "f_sd");
        if (p.contains("keep")) {
            const double k = number(p, "policy", "keep");
            if (k != 0.0 && k != 1.0) throw ConfigError("policy.keep must be 0 or 1");
            sc.policy.keep = k == 1.0 ? KeepPriority::receiver : KeepPriority::transmitter;
        }
        sc.policy.alpha_s = maybe_number(p, "policy", "alpha_s");
        sc.policy.alpha_sp = maybe_number(p, "policy", "alpha_sp");
        sc.policy.alpha_sd = maybe_number(p, "policy", "alpha_sd");
        sc.policy.omega = maybe_number(p, "policy", "omega");
        sc.policy.alpha = maybe_number(p, "policy", "alpha");
    }
    for (auto [v, name] : {std::pair{sc.lambda_p, "policy.lambda_p"},
                           std::pair{sc.lambda_s, "policy.lambda_s"}}) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0,1]");
    }
    check_policy_keys(sc.policy, sc.variant);

    if (root.contains("sweep")) {
        const json& s = root.at("sweep");
        allow_only(s, "sweep", {"lambda_p", "spectral_rate"});
        if (s.contains("lambda_p")) sc.lambda_sweep = parse_range(s.at("lambda_p"), "sweep.lambda_p");
        if (s.contains("spectral_rate")) {
            sc.rate_sweep = parse_range(s.at("spectral_rate"), "sweep.spectral_rate");
            if (!sc.rate_sweep->stop) throw ConfigError("sweep.spectral_rate.stop is missing");
        }
    }
    if (root.contains("sim")) {
        const json& s = root.at("sim");
        allow_only(s, "sim", {"horizon", "warmup", "replicas", "seed"});
        if (s.contains("horizon")) sc.sim.horizon = count(s, "sim", "horizon");
        if (s.contains("warmup")) sc.sim.warmup = count(s, "sim", "warmup");
        if (s.contains("replicas")) sc.sim.replicas = static_cast<int>(count(s, "sim", "replicas"));
        if (s.contains("seed")) sc.sim.seed = count(s, "sim", "seed");
        if (sc.sim.horizon <= sc.sim.warmup) throw ConfigError("sim.horizon must exceed sim.warmup");
        if (sc.sim.replicas < 1) throw ConfigError("sim.replicas must be at least 1");
    }
    if (root.contains("optimizer")) {
        const json& o = root.at("optimizer");
        allow_only(o, "optimizer", {"restarts", "seed", "grid_step", "refine_rounds"});
        if (o.contains("restarts")) {
            sc.optimizer.restarts = static_cast<int>(count(o, "optimizer", "restarts"));
            if (sc.optimizer.restarts < 1) throw ConfigError("optimizer.restarts must be at least 1");
        }
        if (o.contains("seed")) sc.optimizer.seed = count(o, "optimizer", "seed");
        if (o.contains("grid_step")) {
            sc.grid.coarse_step = number(o, "optimizer", "grid_step");
            if (!(sc.grid.coarse_step > 0.0)) throw ConfigError("optimizer.grid_step must be positive");
        }
        if (o.contains("refine_rounds")) {
            sc.grid.refine_rounds = static_cast<int>(count(o, "optimizer", "refine_rounds"));
        }
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

} // namespace coopstab
