#pragma once

#include <optional>

#include "scss/link.hpp"

namespace scss::actuator {

struct PulserConfig {
    double pulse_frequency = 5.0;  // Hz
    double duty_fraction = 0.6;
    double watchdog_timeout = 0.5; // s
    double tick_period = 0.001;    // s
};

struct PulserState {
    bool active = false;
    double phase_origin = 0.0;
    double last_heartbeat_at = 0.0;
    bool motor_energized = false;
    std::optional<std::uint8_t> last_seq_seen;
    // Pulse shape from the latest BRAKE_CMD; the config values apply until one arrives.
    std::optional<double> commanded_frequency;
    std::optional<double> commanded_duty;

    bool operator==(const PulserState&) const = default;
};

void validate(const PulserConfig& cfg);

// Apply one decoded message. Repeated sequence numbers are ignored.
PulserState handle_message(PulserState state, const link::Message& msg, double now);

// ACK echoing the sequence number of a BRAKE_CMD; nothing for other messages.
std::optional<link::Message> acknowledgement(const link::Message& msg);

struct PulserOutput {
    PulserState state;
    bool motor_energized = false;
};

// Square-wave drive while active. A heartbeat older than the watchdog timeout
// drops the command (brakes released).
PulserOutput update_pulser(PulserState state, const PulserConfig& cfg, double now);

}  // namespace scss::actuator
