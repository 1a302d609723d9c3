#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "scss/rng.hpp"

namespace scss::sensors {

struct HallConfig {
    int pulses_per_rev = 4;
    double timer_resolution = 1e-6;  // s
    double estimate_timeout = 1.0;   // s
    int smoothing_window = 3;        // inter-pulse intervals averaged
};

// Captured Hall edges. Timestamps are stored as whole timer ticks so that each one
// is an exact multiple of the timer resolution.
struct PulseLog {
    std::vector<std::int64_t> ticks;
    std::int64_t last_emitted_angle_index = 0;
    // Previous sample, used to place edges between samples.
    double last_angle = 0.0;
    double last_time = 0.0;

    std::size_t size() const { return ticks.size(); }
    double timestamp(std::size_t i, const HallConfig& cfg) const {
        return static_cast<double>(ticks[i]) * cfg.timer_resolution;
    }
};

struct LaneSensorConfig {
    double sample_period = 0.2;
    double misclassification_prob = 0.02;
    double dropout_prob = 0.05;
};

struct LaneObservation {
    int lane_count = 1;
    double observed_at = 0.0;

    bool operator==(const LaneObservation&) const = default;
};

void validate(const HallConfig& cfg);
void validate(const LaneSensorConfig& cfg);

// Append one edge for every multiple of 2*pi/pulses_per_rev crossed since the previous
// call. Edge times are interpolated between samples, then floored to the timer tick.
PulseLog emit_pulses(PulseLog log, double wheel_angle, double now, const HallConfig& cfg);

// Period-measurement speed estimate; 0 with fewer than two edges or a stale newest edge.
double estimate_speed(const PulseLog& log, double now, double wheel_radius, const HallConfig& cfg);

// Camera stand-in: exact count, an adjacent miscount, or nothing.
std::optional<LaneObservation> observe_lanes(int true_lanes, double now, RandomStream& rng,
                                             const LaneSensorConfig& cfg);

}  // namespace scss::sensors
