#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace coopstab {

// The four queues of the network: primary, secondary own traffic,
// ST relaying queue, SR relaying queue.
enum class QueueId { p, s, ps, sd };
inline constexpr std::array<QueueId, 4> kAllQueues = {QueueId::p, QueueId::s, QueueId::ps,
                                                      QueueId::sd};
std::string_view to_string(QueueId q);

struct QueueState {
    std::uint64_t length = 0;
};

// Arrival and service rate of one queue, packets per slot.
struct RatePair {
    double arrival = 0.0;
    double service = 0.0;
};

// Q' = (Q - departures)^+ + arrivals. Departures happen before arrivals.
QueueState evolve(QueueState state, unsigned departures, unsigned arrivals);

// Loynes criterion for a decoupled queue: stable iff lambda < mu - margin.
// The boundary lambda == mu counts as unstable.
bool loynes_stable(RatePair rates, double margin = 0.0);

// Pr{Q = 0} = 1 - lambda/mu for lambda < mu, 0 for a saturated queue.
// Throws InfeasibleRate when mu == 0 and lambda > 0.
double empty_probability(double arrival, double service);

// lambda/mu clamped to [0,1]: the busy probability under the same
// saturation convention. 0/0 counts as idle.
double busy_probability(double arrival, double service);

} // namespace coopstab
