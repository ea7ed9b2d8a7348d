#include "coopstab/queueing.hpp"

#include "coopstab/error.hpp"

#include <algorithm>

namespace coopstab {

std::string_view to_string(QueueId q) {
    switch (q) {
    case QueueId::p: return "p";
    case QueueId::s: return "s";
    case QueueId::ps: return "ps";
    case QueueId::sd: return "sd";
    }
    return "?";
}

QueueState evolve(QueueState state, unsigned departures, unsigned arrivals) {
    const std::uint64_t served = state.length > departures ? state.length - departures : 0;
    return QueueState{served + arrivals};
}

bool loynes_stable(RatePair rates, double margin) {
    return rates.arrival < rates.service - margin;
}

double busy_probability(double arrival, double service) {
    if (service <= 0.0) return arrival > 0.0 ? 1.0 : 0.0;
    return std::clamp(arrival / service, 0.0, 1.0);
}

double empty_probability(double arrival, double service) {
    if (service <= 0.0) {
        if (arrival > 0.0) throw InfeasibleRate("service rate is zero while arrivals are positive");
        return 1.0;
    }
    return 1.0 - busy_probability(arrival, service);
}

} // namespace coopstab
