#include "scss/sim.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "scss/errors.hpp"
#include "scss/rng.hpp"

namespace scss::sim {

namespace {

enum Stream : std::uint64_t { kLaneStream = 0, kForwardLink = 1, kReturnLink = 2 };

// Number of plant steps per component period; periods must be whole multiples.
std::int64_t divider(double period, double dt, const char* field) {
    const double ratio = period / dt;
    const auto n = static_cast<std::int64_t>(std::llround(ratio));
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-6)
        throw ValidationError(field, "must be a whole multiple of sim.plant_dt");
    return n;
}

std::int64_t step_count(const Scenario& scenario, const SimConfig& cfg) {
    return static_cast<std::int64_t>(std::llround(scenario.duration / cfg.plant_dt));
}

}  // namespace

void validate(const Scenario& scenario, const SimConfig& cfg) {
    if (!(cfg.plant_dt > 0.0)) throw ValidationError("sim.plant_dt", "must be > 0");
    if (cfg.trace_decimation < 1) throw ValidationError("sim.trace_decimation", "must be >= 1");
    if (!(scenario.duration >= 0.0) || !std::isfinite(scenario.duration))
        throw ValidationError("duration", "must be >= 0");

    const auto& segs = scenario.road_segments;
    if (segs.empty() || segs.front().start_position != 0.0)
        throw ValidationError("road_segments", "first segment must start at position 0");
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].lane_count < 1) throw ValidationError("road_segments", "lane_count must be >= 1");
        if (i > 0 && !(segs[i].start_position > segs[i - 1].start_position))
            throw ValidationError("road_segments", "start positions must be strictly increasing");
    }

    const auto& prof = scenario.throttle_profile;
    if (prof.empty() || prof.front().start_time != 0.0)
        throw ValidationError("throttle_profile", "first entry must start at time 0");
    for (std::size_t i = 0; i < prof.size(); ++i) {
        const double f = prof[i].drive_force_fraction;
        if (!(f >= 0.0 && f <= 1.0))
            throw ValidationError("throttle_profile", "fractions must be in [0, 1]");
        if (i > 0 && !(prof[i].start_time > prof[i - 1].start_time))
            throw ValidationError("throttle_profile", "start times must be strictly increasing");
    }

    const auto& m = scenario.overrides;
    plant::validate(m.vehicle);
    plant::validate(m.actuator);
    sensors::validate(m.hall);
    sensors::validate(m.lane_sensor);
    supervisor::validate(m.supervisor);
    supervisor::validate(m.limits);
    actuator::validate(m.pulser);
    link::validate(m.link);

    divider(m.supervisor.tick_period, cfg.plant_dt, "supervisor.tick_period");
    divider(m.pulser.tick_period, cfg.plant_dt, "pulser.tick_period");
    divider(m.lane_sensor.sample_period, cfg.plant_dt, "lane_sensor.sample_period");
}

int lanes_at(const std::vector<RoadSegment>& segments, double position) {
    int lanes = segments.front().lane_count;
    for (const auto& s : segments) {
        if (s.start_position > position) break;
        lanes = s.lane_count;
    }
    return lanes;
}

double throttle_at(const std::vector<ThrottlePoint>& profile, double time) {
    double fraction = profile.front().drive_force_fraction;
    for (const auto& p : profile) {
        if (p.start_time > time) break;
        fraction = p.drive_force_fraction;
    }
    return fraction;
}

RunResult run_scenario(const Scenario& scenario, const SimConfig& cfg) {
    validate(scenario, cfg);
    const auto& m = scenario.overrides;
    const double dt = cfg.plant_dt;

    const auto supervisor_div = divider(m.supervisor.tick_period, dt, "supervisor.tick_period");
    const auto pulser_div = divider(m.pulser.tick_period, dt, "pulser.tick_period");
    const auto lane_div = divider(m.lane_sensor.sample_period, dt, "lane_sensor.sample_period");
    const auto steps = step_count(scenario, cfg);

    RandomStream lane_rng(derive_seed(scenario.seed, kLaneStream));
    auto forward_model = m.link;
    forward_model.seed = derive_seed(scenario.seed, kForwardLink);
    auto return_model = m.link;
    return_model.seed = derive_seed(scenario.seed, kReturnLink);
    link::Channel forward(forward_model);
    link::Channel back(return_model);

    plant::VehicleState vehicle;
    plant::BrakeActuatorState brake;
    sensors::PulseLog pulses;
    auto sup = supervisor::initial_state(m.limits);
    actuator::PulserState pulser;
    link::Bytes forward_rx, back_rx;
    std::optional<sensors::LaneObservation> pending_obs;
    bool motor_on = false;

    RunResult result;
    result.trace.reserve(static_cast<std::size_t>(steps / cfg.trace_decimation + 1));

    for (std::int64_t k = 0; k < steps; ++k) {
        const double now = static_cast<double>(k) * dt;

        // Actuator node: inbound frames, then its own tick.
        auto inbound = link::decode_stream(forward_rx, forward.step(now));
        forward_rx = std::move(inbound.accumulator);
        for (const auto& msg : inbound.messages) {
            pulser = actuator::handle_message(pulser, msg, now);
            if (auto ack = actuator::acknowledgement(msg)) back.submit(link::encode_frame(*ack), now);
        }
        // ACKs are decoded to keep the return stream drained; the supervisor does not act on them.
        back_rx = link::decode_stream(back_rx, back.step(now)).accumulator;

        if (k % pulser_div == 0) {
            auto out = actuator::update_pulser(pulser, m.pulser, now);
            pulser = out.state;
            motor_on = out.motor_energized;
        }

        // Supervisor node.
        if (k % lane_div == 0) {
            const int truth = lanes_at(scenario.road_segments, vehicle.position);
            if (auto obs = sensors::observe_lanes(truth, now, lane_rng, m.lane_sensor)) pending_obs = obs;
        }
        if (k % supervisor_div == 0) {
            const double est = sensors::estimate_speed(pulses, now, m.vehicle.wheel_radius, m.hall);
            auto out = supervisor::update_supervisor(sup, m.supervisor, m.limits, est, pending_obs, now);
            pending_obs.reset();
            sup = std::move(out.state);
            for (const auto& msg : out.messages) forward.submit(link::encode_frame(msg), now);
        }

        // Plant.
        double drive = throttle_at(scenario.throttle_profile, now) * m.vehicle.max_drive_force;
        if (cfg.inhibit_drive_on_overspeed && sup.overspeed_active) drive = 0.0;
        brake = plant::step_actuator(brake, motor_on, dt, m.actuator);
        vehicle = plant::step_vehicle(vehicle, drive, brake.brake_torque, dt, m.vehicle);
        vehicle.time = static_cast<double>(k + 1) * dt;
        pulses = sensors::emit_pulses(std::move(pulses), vehicle.wheel_angle, vehicle.time, m.hall);

        if ((k + 1) % cfg.trace_decimation == 0) {
            result.trace.push_back({vehicle.time, vehicle.position, vehicle.speed, sup.last_speed_estimate,
                                    lanes_at(scenario.road_segments, vehicle.position), sup.current_limit,
                                    sup.overspeed_active, motor_on, brake.piston_position,
                                    brake.chamber_pressure, brake.brake_torque,
                                    vehicle.drive_force_applied});
        }
    }

    result.summary = summarize(result.trace, m.limits, scenario);
    return result;
}

RunSummary summarize(const std::vector<TraceRecord>& trace, const supervisor::SpeedLimitTable& table,
                     const Scenario& scenario) {
    RunSummary s;
    if (trace.empty()) return s;

    bool was_active = false;
    bool was_energized = false;
    double prev_time = 0.0;
    for (const auto& r : trace) {
        const double legal = supervisor::resolve_limit(r.lanes_true, table);
        s.max_overshoot = std::max(s.max_overshoot, r.speed_true - legal);
        if (r.speed_true > legal) s.time_over_limit += r.time - prev_time;
        if (r.overspeed_active && !was_active) ++s.brake_activation_count;
        if (r.motor_energized && !was_energized) ++s.pulse_count;
        was_active = r.overspeed_active;
        was_energized = r.motor_energized;
        prev_time = r.time;
    }
    s.final_position = trace.back().position;

    const auto& segs = scenario.road_segments;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const double start = segs[i].start_position;
        const double end = i + 1 < segs.size() ? segs[i + 1].start_position : INFINITY;
        auto first = std::find_if(trace.begin(), trace.end(),
                                  [&](const TraceRecord& r) { return r.position >= start; });
        if (first == trace.end() || first->position >= end) continue;

        const double entry = i == 0 ? 0.0 : first->time;
        const double legal = supervisor::resolve_limit(segs[i].lane_count, table);
        std::optional<double> compliant_at;
        double last_inside = first->time;
        for (auto it = first; it != trace.end() && it->position < end; ++it) {
            last_inside = it->time;
            if (it->speed_true <= legal) {
                compliant_at = it == first ? entry : it->time;
                break;
            }
        }
        s.time_to_compliance_per_segment.push_back(compliant_at.value_or(last_inside) - entry);
    }
    return s;
}

}  // namespace scss::sim
