#pragma once

#include "coopstab/phy.hpp"
#include "coopstab/policy.hpp"
#include "coopstab/queueing.hpp"
#include "coopstab/region.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace coopstab {

using PolicyVariant = std::variant<RaPolicy, TdmaPolicy>;

struct SimConfig {
    Variant variant = Variant::ra;
    LinkProbabilities link;
    double lambda_p = 0.0;
    double lambda_s = 0.0;
    PolicyVariant policy = RaPolicy{};
    std::uint64_t horizon = 1'000'000;
    std::uint64_t warmup = 100'000;
    int replicas = 8;
    std::uint64_t seed = 20130611;

    // Throws ConfigError when the policy does not fit the variant.
    void validate() const;
};

// Everything that happened to the four queues in one slot. potential[i] is
// 1 when queue i's head-of-line packet would have left had the queue been
// nonempty, given the other queues' actual states; opportunity[i] is 1 when
// the MAC offered queue i the channel in that sense.
struct SlotOutcome {
    std::array<std::uint8_t, 4> arrivals{};
    std::array<std::uint8_t, 4> departures{};
    std::array<std::uint8_t, 4> potential{};
    std::array<std::uint8_t, 4> opportunity{};
    bool primary_busy = false;
    bool st_sends_own = false;   // real or dummy packet from Q_s
    bool st_sends_relay = false; // real or dummy packet from Q_ps
    bool sr_sends = false;
    bool pr_decodes_primary = false;
    bool st_decodes_primary = false;
    bool sr_decodes_primary = false;
};

// One replica of the slotted network.
class Network {
public:
    Network(const SimConfig& config, std::uint64_t stream);

    SlotOutcome step();
    std::uint64_t length(QueueId q) const { return lengths_[static_cast<int>(q)]; }

private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    SimConfig config_;
    std::mt19937_64 rng_;
    std::array<std::uint64_t, 4> lengths_{};
};

enum class Verdict { stable, unstable, indeterminate };
std::string_view to_string(Verdict v);

struct DriftSettings {
    double sigmas = 3.0;
    double floor_per_slot = 1e-4;
    double cap_fraction = 0.01; // max length cap as a fraction of the horizon
};

struct ReplicaQueueStats {
    std::uint64_t arrivals = 0;
    std::uint64_t departures = 0;
    std::uint64_t potential = 0;
    std::uint64_t opportunities = 0;
    std::uint64_t hol_slots = 0;
    std::uint64_t final_length = 0;
    std::uint64_t max_length = 0;
    double slope = 0.0;    // packets per slot over the drift window
    double slope_se = 0.0;
};

struct ReplicaStats {
    std::uint64_t measured_slots = 0;
    std::uint64_t horizon = 0;
    std::array<ReplicaQueueStats, 4> queues{};
};

ReplicaStats run_replica(const SimConfig& config, int index);

struct RateEstimate {
    double mean = 0.0;
    double se = 0.0; // NaN with a single replica
    bool defined = false;
};

struct QueueReport {
    RateEstimate arrival;
    RateEstimate service;     // mean potential service indicator
    RateEstimate hol_service; // departures per slot with a head-of-line packet
    RateEstimate drift;       // per 10^4 slots
    double final_length = 0.0;
    Verdict verdict = Verdict::indeterminate;
};

struct SimReport {
    Variant variant = Variant::ra;
    int replicas = 0;
    std::uint64_t horizon = 0;
    std::uint64_t warmup = 0;
    std::array<QueueReport, 4> queues{};
    Verdict verdict = Verdict::indeterminate;

    const QueueReport& operator[](QueueId q) const { return queues[static_cast<int>(q)]; }
};

// Means and replica standard errors (sample sd / sqrt(n)).
SimReport estimate_rates(std::span<const ReplicaStats> replicas, const DriftSettings& drift = {});

// Runs all replicas sequentially, each on its own (seed, index) stream.
SimReport run(const SimConfig& config, const DriftSettings& drift = {});

struct ProbeSettings {
    std::uint64_t horizon = 200'000;
    std::uint64_t warmup = 20'000;
    int replicas = 1;
    std::uint64_t seed = 20130611;
    DriftSettings drift;
};

struct ProbeResult {
    Verdict verdict = Verdict::indeterminate;
    SimReport report;
};

ProbeResult stability_probe(const LinkProbabilities& link, Variant variant, double lambda_p,
                            double lambda_s, const PolicyVariant& policy,
                            const ProbeSettings& settings = {});

} // namespace coopstab
