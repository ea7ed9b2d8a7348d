#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace coopstab {

// Terminals: primary transmitter/receiver, secondary transmitter/receiver.
enum class Node { p, pd, s, sd };

// Point-to-point links the MAC uses.
enum class Link { p_pd, p_s, p_sd, s_sd, s_pd, sd_pd };
inline constexpr std::array<Link, 6> kAllLinks = {Link::p_pd, Link::p_s, Link::p_sd,
                                                  Link::s_sd, Link::s_pd, Link::sd_pd};

// Links to the primary receiver decoded while the other secondary node
// transmits concurrently.
enum class InterferedLink {
    s_pd_under_sd, // ST -> PR while SR transmits
    sd_pd_under_s, // SR -> PR while ST transmits
};
inline constexpr std::array<InterferedLink, 2> kAllInterferedLinks = {
    InterferedLink::s_pd_under_sd, InterferedLink::sd_pd_under_s};

std::string_view to_string(Node n);
std::string_view to_string(Link l);
std::string_view to_string(InterferedLink l);
Node transmitter(Link l);
Node receiver(Link l);
Link direct_link(InterferedLink l);
Node interferer(InterferedLink l);

// Physical-layer description: per-node powers and noise, per-link fading
// variances, packet size and slot timing.
struct PhyParams {
    std::map<Node, double> tx_power;                       // W
    std::map<Node, double> noise_power;                    // W
    std::map<std::pair<Node, Node>, double> channel_variance;
    double packet_bits = 0.0;
    double slot_duration = 1.0; // T, seconds
    double sensing_time = 0.0;  // tau, seconds
    double bandwidth = 1.0;     // W, Hz

    // Throws InvalidParameter or ConfigError naming the offending field.
    void validate() const;

    // Spectral rate of the primary, b / (W T).
    double spectral_rate() const { return packet_bits / (bandwidth * slot_duration); }
    PhyParams with_spectral_rate(double rate) const;

    // Unit powers and noise; each link's variance carries the whole
    // received-SNR product gamma_jk * sigma^2_jk.
    static PhyParams from_snr_products(const std::map<Link, double>& snr, double packet_bits,
                                       double slot_duration, double sensing_time,
                                       double bandwidth);
};

// Outage probabilities exactly as a link table lists them. Every field is
// required; optional only so that parsers can report which one is missing.
struct OutageTable {
    std::array<std::optional<double>, 6> direct{};
    std::array<std::optional<double>, 2> interfered{};

    std::optional<double>& operator[](Link l) { return direct[static_cast<int>(l)]; }
    std::optional<double>& operator[](InterferedLink l) { return interfered[static_cast<int>(l)]; }
};

// Success probabilities for every link the MAC needs. Immutable once built;
// invariants: entries in [0,1] and interfered <= direct on the same link.
class LinkProbabilities {
public:
    // Validates and stores success probabilities.
    LinkProbabilities(const std::array<double, 6>& direct_success,
                      const std::array<double, 2>& interfered_success);

    double success(Link l) const { return direct_[static_cast<int>(l)]; }
    double outage(Link l) const { return 1.0 - success(l); }
    double interfered_success(InterferedLink l) const { return interfered_[static_cast<int>(l)]; }

    // Strong MPR: concurrent transmissions cost nothing at the PR.
    bool is_strong_mpr(double tol = 1e-12) const;
    // Same table with interfered entries raised to the direct ones.
    LinkProbabilities as_strong_mpr() const;

    // 1 - P_{p,pd} P_{p,sd} P_{p,s}: the primary rate with full cooperation.
    double max_primary_service() const;

    bool operator==(const LinkProbabilities&) const = default;

private:
    std::array<double, 6> direct_;
    std::array<double, 2> interfered_;
};

inline constexpr double kProbTolerance = 1e-12;

// 2^(b / (T_j W)) - 1.
double decoding_threshold(double packet_bits, double tx_time, double bandwidth);

// Transmission time within a slot: the primary uses the whole slot, the
// secondary nodes lose the sensing interval.
double tx_time(Node node, double slot_duration, double sensing_time);

// Rayleigh outage without interference: 1 - exp(-gamma N / (sigma^2 P)).
double outage_prob(double tx_power, double noise_power, double variance, double threshold);

// Success probability of j -> k while l transmits concurrently.
double interfered_success_prob(double tx_power_j, double tx_power_l, double variance_jk,
                               double variance_lk, double noise_k, double threshold);

LinkProbabilities build_link_probabilities(const PhyParams& phy);
LinkProbabilities build_link_probabilities(const OutageTable& table);

} // namespace coopstab
