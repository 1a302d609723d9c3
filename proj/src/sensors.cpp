#include "scss/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scss/errors.hpp"

namespace scss::sensors {

void validate(const HallConfig& cfg) {
    if (cfg.pulses_per_rev < 1) throw ValidationError("hall.pulses_per_rev", "must be >= 1");
    if (!(cfg.timer_resolution > 0.0)) throw ValidationError("hall.timer_resolution", "must be > 0");
    if (!(cfg.estimate_timeout > 0.0)) throw ValidationError("hall.estimate_timeout", "must be > 0");
    if (cfg.smoothing_window < 1) throw ValidationError("hall.smoothing_window", "must be >= 1");
}

void validate(const LaneSensorConfig& cfg) {
    if (!(cfg.sample_period > 0.0)) throw ValidationError("lane_sensor.sample_period", "must be > 0");
    if (!(cfg.misclassification_prob >= 0.0 && cfg.misclassification_prob <= 1.0))
        throw ValidationError("lane_sensor.misclassification_prob", "must be in [0, 1]");
    if (!(cfg.dropout_prob >= 0.0 && cfg.dropout_prob <= 1.0))
        throw ValidationError("lane_sensor.dropout_prob", "must be in [0, 1]");
}

PulseLog emit_pulses(PulseLog log, double wheel_angle, double now, const HallConfig& cfg) {
    const double spacing = 2.0 * std::numbers::pi / cfg.pulses_per_rev;
    const auto index = static_cast<std::int64_t>(std::floor(wheel_angle / spacing));

    const double swept = wheel_angle - log.last_angle;
    for (std::int64_t i = log.last_emitted_angle_index + 1; i <= index && swept > 0.0; ++i) {
        const double crossing = static_cast<double>(i) * spacing;
        const double frac = std::clamp((crossing - log.last_angle) / swept, 0.0, 1.0);
        const double t = log.last_time + frac * (now - log.last_time);
        auto tick = static_cast<std::int64_t>(std::floor(t / cfg.timer_resolution + 1e-9));
        // Two edges inside one timer tick still read as distinct captures.
        if (!log.ticks.empty()) tick = std::max(tick, log.ticks.back() + 1);
        log.ticks.push_back(tick);
    }
    log.last_emitted_angle_index = std::max(log.last_emitted_angle_index, index);
    log.last_angle = wheel_angle;
    log.last_time = now;
    return log;
}

double estimate_speed(const PulseLog& log, double now, double wheel_radius, const HallConfig& cfg) {
    const std::size_t n = log.ticks.size();
    if (n < 2) return 0.0;
    if (now - log.timestamp(n - 1, cfg) > cfg.estimate_timeout) return 0.0;

    const std::size_t window = std::min<std::size_t>(cfg.smoothing_window, n - 1);
    const std::int64_t span_ticks = log.ticks[n - 1] - log.ticks[n - 1 - window];
    const double mean_interval =
        static_cast<double>(span_ticks) * cfg.timer_resolution / static_cast<double>(window);
    const double arc = 2.0 * std::numbers::pi * wheel_radius / cfg.pulses_per_rev;
    return arc / mean_interval;
}

std::optional<LaneObservation> observe_lanes(int true_lanes, double now, RandomStream& rng,
                                             const LaneSensorConfig& cfg) {
    // Draw order is fixed so a seed pins the whole observation sequence.
    const bool dropped = rng.bernoulli(cfg.dropout_prob);
    const bool misread = rng.bernoulli(cfg.misclassification_prob);
    const bool pick_upper = rng.bernoulli(0.5);
    if (dropped) return std::nullopt;

    int count = true_lanes;
    if (misread) {
        if (true_lanes <= 1)
            count = 2;
        else
            count = pick_upper ? true_lanes + 1 : true_lanes - 1;
    }
    return LaneObservation{std::max(1, count), now};
}

}  // namespace scss::sensors
