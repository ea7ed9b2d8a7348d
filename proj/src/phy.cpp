#include "coopstab/phy.hpp"

#include "coopstab/error.hpp"

#include <cmath>
#include <string>

namespace coopstab {

namespace {

struct LinkEnds {
    Node tx;
    Node rx;
};

constexpr std::array<LinkEnds, 6> kEnds = {{
    {Node::p, Node::pd},
    {Node::p, Node::s},
    {Node::p, Node::sd},
    {Node::s, Node::sd},
    {Node::s, Node::pd},
    {Node::sd, Node::pd},
}};

void require_probability(double v, std::string_view what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidParameter(std::string(what) + " must lie in [0,1], got " + std::to_string(v));
    }
}

double lookup(const std::map<Node, double>& m, Node n, std::string_view field) {
    auto it = m.find(n);
    if (it == m.end()) {
        throw ConfigError(std::string(field) + "." + std::string(to_string(n)) + " is missing");
    }
    return it->second;
}

double variance_of(const PhyParams& phy, Node j, Node k) {
    auto it = phy.channel_variance.find({j, k});
    if (it == phy.channel_variance.end()) {
        throw ConfigError("channel_variance." + std::string(to_string(j)) + "_" +
                          std::string(to_string(k)) + " is missing");
    }
    return it->second;
}

} // namespace

std::string_view to_string(Node n) {
    switch (n) {
    case Node::p: return "p";
    case Node::pd: return "pd";
    case Node::s: return "s";
    case Node::sd: return "sd";
    }
    return "?";
}

std::string_view to_string(Link l) {
    switch (l) {
    case Link::p_pd: return "p_pd";
    case Link::p_s: return "p_s";
    case Link::p_sd: return "p_sd";
    case Link::s_sd: return "s_sd";
    case Link::s_pd: return "s_pd";
    case Link::sd_pd: return "sd_pd";
    }
    return "?";
}

std::string_view to_string(InterferedLink l) {
    switch (l) {
    case InterferedLink::s_pd_under_sd: return "s_pd_under_sd";
    case InterferedLink::sd_pd_under_s: return "sd_pd_under_s";
    }
    return "?";
}

Node transmitter(Link l) { return kEnds[static_cast<int>(l)].tx; }
Node receiver(Link l) { return kEnds[static_cast<int>(l)].rx; }

Link direct_link(InterferedLink l) {
    return l == InterferedLink::s_pd_under_sd ? Link::s_pd : Link::sd_pd;
}

Node interferer(InterferedLink l) {
    return l == InterferedLink::s_pd_under_sd ? Node::sd : Node::s;
}

void PhyParams::validate() const {
    if (!(slot_duration > 0.0)) throw InvalidParameter("slot_duration must be positive");
    if (!(sensing_time >= 0.0 && sensing_time < slot_duration)) {
        throw InvalidParameter("sensing_time must satisfy 0 <= tau < T");
    }
    if (!(bandwidth > 0.0)) throw InvalidParameter("bandwidth must be positive");
    if (!(packet_bits >= 0.0)) throw InvalidParameter("packet_bits must be non-negative");
    for (Link l : kAllLinks) {
        if (!(lookup(tx_power, transmitter(l), "tx_power") > 0.0)) {
            throw InvalidParameter("tx_power." + std::string(to_string(transmitter(l))) +
                                   " must be positive");
        }
        if (!(lookup(noise_power, receiver(l), "noise_power") > 0.0)) {
            throw InvalidParameter("noise_power." + std::string(to_string(receiver(l))) +
                                   " must be positive");
        }
        if (!(variance_of(*this, transmitter(l), receiver(l)) > 0.0)) {
            throw InvalidParameter("channel_variance." + std::string(to_string(l)) +
                                   " must be positive");
        }
    }
}

PhyParams PhyParams::with_spectral_rate(double rate) const {
    if (!(rate >= 0.0)) throw InvalidParameter("spectral rate must be non-negative");
    PhyParams out = *this;
    out.packet_bits = rate * bandwidth * slot_duration;
    return out;
}

PhyParams PhyParams::from_snr_products(const std::map<Link, double>& snr, double packet_bits,
                                       double slot_duration, double sensing_time,
                                       double bandwidth) {
    PhyParams phy;
    for (Node n : {Node::p, Node::pd, Node::s, Node::sd}) {
        phy.tx_power[n] = 1.0;
        phy.noise_power[n] = 1.0;
    }
    for (Link l : kAllLinks) {
        auto it = snr.find(l);
        if (it == snr.end()) {
            throw ConfigError("snr_products." + std::string(to_string(l)) + " is missing");
        }
        phy.channel_variance[{transmitter(l), receiver(l)}] = it->second;
    }
    phy.packet_bits = packet_bits;
    phy.slot_duration = slot_duration;
    phy.sensing_time = sensing_time;
    phy.bandwidth = bandwidth;
    return phy;
}

LinkProbabilities::LinkProbabilities(const std::array<double, 6>& direct_success,
                                     const std::array<double, 2>& interfered_success)
    : direct_(direct_success), interfered_(interfered_success) {
    for (Link l : kAllLinks) require_probability(success(l), to_string(l));
    for (InterferedLink l : kAllInterferedLinks) {
        require_probability(this->interfered_success(l), to_string(l));
        if (this->interfered_success(l) > success(direct_link(l)) + kProbTolerance) {
            throw ConsistencyError("interfered success " + std::string(to_string(l)) + " = " +
                                   std::to_string(this->interfered_success(l)) +
                                   " exceeds direct success " +
                                   std::to_string(success(direct_link(l))));
        }
    }
}

bool LinkProbabilities::is_strong_mpr(double tol) const {
    for (InterferedLink l : kAllInterferedLinks) {
        if (std::abs(interfered_success(l) - success(direct_link(l))) > tol) return false;
    }
    return true;
}

LinkProbabilities LinkProbabilities::as_strong_mpr() const {
    return LinkProbabilities(direct_, {success(Link::s_pd), success(Link::sd_pd)});
}

double LinkProbabilities::max_primary_service() const {
    return 1.0 - outage(Link::p_pd) * outage(Link::p_sd) * outage(Link::p_s);
}

double decoding_threshold(double packet_bits, double tx_time, double bandwidth) {
    if (!(tx_time > 0.0)) throw InvalidParameter("transmission time must be positive");
    if (!(bandwidth > 0.0)) throw InvalidParameter("bandwidth must be positive");
    return std::exp2(packet_bits / (tx_time * bandwidth)) - 1.0;
}

double tx_time(Node node, double slot_duration, double sensing_time) {
    if (!(slot_duration > 0.0)) throw InvalidParameter("slot_duration must be positive");
    if (!(sensing_time >= 0.0 && sensing_time < slot_duration)) {
        throw InvalidParameter("sensing_time must satisfy 0 <= tau < T");
    }
    switch (node) {
    case Node::p: return slot_duration;
    case Node::s:
    case Node::sd: return slot_duration - sensing_time;
    case Node::pd: break;
    }
    throw InvalidParameter("the primary receiver never transmits");
}

double outage_prob(double tx_power, double noise_power, double variance, double threshold) {
    if (!(tx_power > 0.0)) throw InvalidParameter("tx_power must be positive");
    if (!(variance > 0.0)) throw InvalidParameter("channel variance must be positive");
    if (!(noise_power > 0.0)) throw InvalidParameter("noise_power must be positive");
    if (!(threshold >= 0.0)) throw InvalidParameter("threshold must be non-negative");
    return -std::expm1(-threshold * noise_power / (variance * tx_power));
}

double interfered_success_prob(double tx_power_j, double tx_power_l, double variance_jk,
                               double variance_lk, double noise_k, double threshold) {
    if (!(tx_power_l > 0.0)) throw InvalidParameter("interferer tx_power must be positive");
    if (!(variance_lk > 0.0)) throw InvalidParameter("interferer variance must be positive");
    const double direct = 1.0 - outage_prob(tx_power_j, noise_k, variance_jk, threshold);
    const double penalty = 1.0 + (tx_power_l * threshold / tx_power_j) * (variance_lk / variance_jk);
    return direct / penalty;
}

LinkProbabilities build_link_probabilities(const PhyParams& phy) {
    phy.validate();
    std::array<double, 6> direct{};
    for (Link l : kAllLinks) {
        const Node j = transmitter(l);
        const Node k = receiver(l);
        const double gamma = decoding_threshold(
            phy.packet_bits, tx_time(j, phy.slot_duration, phy.sensing_time), phy.bandwidth);
        direct[static_cast<int>(l)] =
            1.0 - outage_prob(phy.tx_power.at(j), phy.noise_power.at(k), variance_of(phy, j, k), gamma);
    }
    std::array<double, 2> interfered{};
    for (InterferedLink il : kAllInterferedLinks) {
        const Link l = direct_link(il);
        const Node j = transmitter(l);
        const Node k = receiver(l);
        const Node i = interferer(il);
        const double gamma = decoding_threshold(
            phy.packet_bits, tx_time(j, phy.slot_duration, phy.sensing_time), phy.bandwidth);
        interfered[static_cast<int>(il)] = interfered_success_prob(
            phy.tx_power.at(j), phy.tx_power.at(i), variance_of(phy, j, k), variance_of(phy, i, k),
            phy.noise_power.at(k), gamma);
    }
    return LinkProbabilities(direct, interfered);
}

LinkProbabilities build_link_probabilities(const OutageTable& table) {
    std::array<double, 6> direct{};
    for (Link l : kAllLinks) {
        const auto& v = table.direct[static_cast<int>(l)];
        if (!v) throw ConfigError("link " + std::string(to_string(l)) + " is missing");
        require_probability(*v, to_string(l));
        direct[static_cast<int>(l)] = 1.0 - *v;
    }
    std::array<double, 2> interfered{};
    for (InterferedLink l : kAllInterferedLinks) {
        const auto& v = table.interfered[static_cast<int>(l)];
        if (!v) throw ConfigError("link " + std::string(to_string(l)) + " is missing");
        require_probability(*v, to_string(l));
        interfered[static_cast<int>(l)] = 1.0 - *v;
    }
    return LinkProbabilities(direct, interfered);
}

} // namespace coopstab
