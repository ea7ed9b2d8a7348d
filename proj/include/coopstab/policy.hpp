#pragma once

#include <string_view>

namespace coopstab {

// Which relay stores a packet decoded by both ST and SR when the PR fails.
// receiver (SR keeps) corresponds to P = 1.
enum class KeepPriority { transmitter = 0, receiver = 1 };
std::string_view to_string(KeepPriority k);

// Relay admission fractions and keep-priority, shared by every variant.
struct Admission {
    double f_s = 0.0;
    double f_sd = 0.0;
    KeepPriority keep = KeepPriority::receiver;

    void validate() const;
};

// Random-access MAC parameters for idle primary slots.
struct RaPolicy {
    double alpha_s = 0.0;  // ST sends from its own queue
    double alpha_sp = 0.0; // ST sends from its relaying queue
    double alpha_sd = 0.0; // SR sends from its relaying queue
    Admission admission;

    double alpha_idle() const { return 1.0 - alpha_s - alpha_sp; }
    void validate() const;
};

// Idle slots go to the ST with probability omega, otherwise to the SR; the
// ST serves its own queue with probability alpha.
struct TdmaPolicy {
    double omega = 0.0;
    double alpha = 0.0;
    Admission admission;

    void validate() const;
};

} // namespace coopstab
