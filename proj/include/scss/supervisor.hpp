#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "scss/link.hpp"
#include "scss/sensors.hpp"

namespace scss::supervisor {

inline double kmh_to_mps(double kmh) { return kmh / 3.6; }

struct LimitEntry {
    int lane_count = 1;
    double limit = 0.0;  // m/s

    bool operator==(const LimitEntry&) const = default;
};

struct SpeedLimitTable {
    std::vector<LimitEntry> entries;
    double fallback_limit = 0.0;  // m/s, used until the first lane observation

    bool operator==(const SpeedLimitTable&) const = default;
};

// 1 -> 30, 2 -> 50, 3 -> 80, 4 -> 100 km/h; fallback 50 km/h.
SpeedLimitTable default_limit_table();

struct SupervisorConfig {
    double engage_factor = 1.05;
    double release_factor = 0.98;
    double debounce = 0.3;               // s
    double tick_period = 0.01;           // s
    double command_repeat_period = 0.1;  // s, also the heartbeat period
    // Pulse shape carried in BRAKE_CMD.
    int command_duty_percent = 60;
    int command_freq_decihertz = 50;
};

struct SupervisorState {
    double current_limit = 0.0;
    double last_speed_estimate = 0.0;
    bool overspeed_active = false;
    std::optional<double> overspeed_candidate_since;
    std::optional<double> last_command_sent_at;
    std::optional<double> last_heartbeat_sent_at;
    std::uint8_t next_seq = 0;
};

void validate(const SpeedLimitTable& table);
void validate(const SupervisorConfig& cfg);

SupervisorState initial_state(const SpeedLimitTable& table);

// Exact match, else the largest lane count below the input, else the smallest entry.
double resolve_limit(int lane_count, const SpeedLimitTable& table);

struct TickOutput {
    SupervisorState state;
    std::vector<link::Message> messages;
};

TickOutput update_supervisor(SupervisorState state, const SupervisorConfig& cfg,
                             const SpeedLimitTable& table, double speed_est,
                             const std::optional<sensors::LaneObservation>& lane_obs, double now);

}  // namespace scss::supervisor
