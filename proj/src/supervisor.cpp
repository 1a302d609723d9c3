#include "scss/supervisor.hpp"

#include <cmath>

#include "scss/errors.hpp"

namespace scss::supervisor {

namespace {

// Tick times are accumulated doubles; comparisons against periods allow this much slack.
constexpr double kTimeEps = 1e-9;

double round4(double v) { return std::round(v * 1e4) / 1e4; }

}  // namespace

SpeedLimitTable default_limit_table() {
    SpeedLimitTable t;
    for (auto [lanes, kmh] : {std::pair{1, 30.0}, {2, 50.0}, {3, 80.0}, {4, 100.0}})
        t.entries.push_back({lanes, round4(kmh_to_mps(kmh))});
    t.fallback_limit = round4(kmh_to_mps(50.0));
    return t;
}

void validate(const SpeedLimitTable& table) {
    if (table.entries.empty()) throw ValidationError("limits", "table needs at least one entry");
    for (std::size_t i = 0; i < table.entries.size(); ++i) {
        const auto& e = table.entries[i];
        if (e.lane_count < 1) throw ValidationError("limits", "lane counts must be >= 1");
        if (!(e.limit > 0.0)) throw ValidationError("limits", "limits must be > 0");
        if (i > 0) {
            const auto& prev = table.entries[i - 1];
            if (e.lane_count <= prev.lane_count)
                throw ValidationError("limits", "lane counts must be strictly increasing");
            if (e.limit < prev.limit)
                throw ValidationError("limits", "limits must not decrease with lane count");
        }
    }
    if (!(table.fallback_limit > 0.0)) throw ValidationError("limits.fallback", "must be > 0");
}

void validate(const SupervisorConfig& cfg) {
    if (!(cfg.engage_factor > 1.0)) throw ValidationError("supervisor.engage_factor", "must be > 1");
    if (!(cfg.release_factor < 1.0) || !(cfg.release_factor > 0.0))
        throw ValidationError("supervisor.release_factor", "must be in (0, 1)");
    if (!(cfg.debounce >= 0.0)) throw ValidationError("supervisor.debounce", "must be >= 0");
    if (!(cfg.tick_period > 0.0)) throw ValidationError("supervisor.tick_period", "must be > 0");
    if (!(cfg.command_repeat_period > 0.0))
        throw ValidationError("supervisor.command_repeat_period", "must be > 0");
    if (cfg.command_duty_percent < 1 || cfg.command_duty_percent > 100)
        throw ValidationError("supervisor.command_duty_percent", "must be in [1, 100]");
    if (cfg.command_freq_decihertz < 1 || cfg.command_freq_decihertz > 255)
        throw ValidationError("supervisor.command_freq_decihertz", "must be in [1, 255]");
}

SupervisorState initial_state(const SpeedLimitTable& table) {
    SupervisorState s;
    s.current_limit = table.fallback_limit;
    return s;
}

double resolve_limit(int lane_count, const SpeedLimitTable& table) {
    double limit = table.entries.front().limit;
    for (const auto& e : table.entries) {
        if (e.lane_count > lane_count) break;
        limit = e.limit;
    }
    return limit;
}

TickOutput update_supervisor(SupervisorState state, const SupervisorConfig& cfg,
                             const SpeedLimitTable& table, double speed_est,
                             const std::optional<sensors::LaneObservation>& lane_obs, double now) {
    TickOutput out;
    if (lane_obs) state.current_limit = resolve_limit(lane_obs->lane_count, table);
    state.last_speed_estimate = speed_est;

    const double engage_at = cfg.engage_factor * state.current_limit;
    const double release_at = cfg.release_factor * state.current_limit;

    bool edge = false;
    if (state.overspeed_active) {
        if (speed_est < release_at) {
            state.overspeed_active = false;
            edge = true;
        }
    } else if (speed_est > engage_at) {
        if (!state.overspeed_candidate_since) state.overspeed_candidate_since = now;
        if (now - *state.overspeed_candidate_since >= cfg.debounce - kTimeEps) {
            state.overspeed_active = true;
            state.overspeed_candidate_since.reset();
            edge = true;
        }
    } else {
        state.overspeed_candidate_since.reset();
    }

    auto next_seq = [&state] { return state.next_seq++; };

    // After the first command the current intent is repeated, so a lost release
    // cannot leave the actuator braking.
    const bool repeat_due = state.last_command_sent_at &&
                            now - *state.last_command_sent_at >= cfg.command_repeat_period - kTimeEps;
    if (edge || repeat_due) {
        out.messages.push_back(link::BrakeCmd{next_seq(), state.overspeed_active,
                                              static_cast<std::uint8_t>(cfg.command_duty_percent),
                                              static_cast<std::uint8_t>(cfg.command_freq_decihertz)});
        state.last_command_sent_at = now;
    }

    if (!state.last_heartbeat_sent_at ||
        now - *state.last_heartbeat_sent_at >= cfg.command_repeat_period - kTimeEps) {
        const auto ms = static_cast<std::uint64_t>(std::llround(now * 1000.0));
        out.messages.push_back(link::Heartbeat{next_seq(), static_cast<std::uint32_t>(ms)});
        state.last_heartbeat_sent_at = now;
    }

    out.state = std::move(state);
    return out;
}

}  // namespace scss::supervisor
