#include "scss/actuator_ctrl.hpp"

#include <cmath>

#include "scss/errors.hpp"

namespace scss::actuator {

namespace {
constexpr double kTimeEps = 1e-9;
}

void validate(const PulserConfig& cfg) {
    if (!(cfg.pulse_frequency > 0.0)) throw ValidationError("pulser.pulse_frequency", "must be > 0");
    if (!(cfg.duty_fraction > 0.0 && cfg.duty_fraction <= 1.0))
        throw ValidationError("pulser.duty_fraction", "must be in (0, 1]");
    if (!(cfg.watchdog_timeout > 0.0)) throw ValidationError("pulser.watchdog_timeout", "must be > 0");
    if (!(cfg.tick_period > 0.0)) throw ValidationError("pulser.tick_period", "must be > 0");
}

PulserState handle_message(PulserState state, const link::Message& msg, double now) {
    const std::uint8_t seq = link::sequence_of(msg);
    if (state.last_seq_seen == seq) return state;

    if (const auto* cmd = std::get_if<link::BrakeCmd>(&msg)) {
        state.last_seq_seen = seq;
        if (cmd->active && !state.active) state.phase_origin = now;
        state.active = cmd->active;
        if (!state.active) state.motor_energized = false;
        if (cmd->duty_percent > 0 && cmd->freq_decihertz > 0) {
            state.commanded_duty = cmd->duty_percent / 100.0;
            state.commanded_frequency = cmd->freq_decihertz / 10.0;
        }
    } else if (std::holds_alternative<link::Heartbeat>(msg)) {
        state.last_seq_seen = seq;
        state.last_heartbeat_at = now;
    }
    return state;
}

std::optional<link::Message> acknowledgement(const link::Message& msg) {
    if (const auto* cmd = std::get_if<link::BrakeCmd>(&msg)) return link::Ack{cmd->seq};
    return std::nullopt;
}

PulserOutput update_pulser(PulserState state, const PulserConfig& cfg, double now) {
    if (now - state.last_heartbeat_at > cfg.watchdog_timeout + kTimeEps) state.active = false;

    bool energized = false;
    if (state.active) {
        const double period = 1.0 / state.commanded_frequency.value_or(cfg.pulse_frequency);
        const double on_time = state.commanded_duty.value_or(cfg.duty_fraction) * period;
        const double phase = now - state.phase_origin;
        const double cycles = std::floor(phase / period + kTimeEps);
        const double within = phase - cycles * period;
        energized = within < on_time - kTimeEps;
    }
    state.motor_energized = energized;
    return {state, energized};
}

}  // namespace scss::actuator
