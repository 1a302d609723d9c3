#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scss/actuator_ctrl.hpp"
#include "scss/link.hpp"
#include "scss/plant.hpp"
#include "scss/sensors.hpp"
#include "scss/supervisor.hpp"

namespace scss::sim {

struct RoadSegment {
    double start_position = 0.0;  // m
    int lane_count = 1;
};

struct ThrottlePoint {
    double start_time = 0.0;  // s
    double drive_force_fraction = 0.0;
};

// Every tunable of every node. Scenario files override individual fields.
struct ModuleConfigs {
    plant::VehicleParams vehicle;
    plant::ActuatorParams actuator;
    sensors::HallConfig hall;
    sensors::LaneSensorConfig lane_sensor;
    supervisor::SupervisorConfig supervisor;
    supervisor::SpeedLimitTable limits = supervisor::default_limit_table();
    actuator::PulserConfig pulser;
    link::ChannelModel link;  // seed is ignored; channel streams derive from Scenario::seed
};

struct Scenario {
    std::string name = "scenario";
    double duration = 0.0;  // s
    std::vector<RoadSegment> road_segments{{0.0, 2}};
    std::vector<ThrottlePoint> throttle_profile{{0.0, 0.0}};
    ModuleConfigs overrides;
    std::uint64_t seed = 1;
};

struct SimConfig {
    double plant_dt = 0.001;
    bool inhibit_drive_on_overspeed = true;
    int trace_decimation = 10;
};

struct TraceRecord {
    double time = 0.0;
    double position = 0.0;
    double speed_true = 0.0;
    double speed_est = 0.0;
    int lanes_true = 1;
    double limit = 0.0;
    bool overspeed_active = false;
    bool motor_energized = false;
    double piston_position = 0.0;
    double chamber_pressure = 0.0;
    double brake_torque = 0.0;
    double drive_force = 0.0;
};

struct RunSummary {
    double max_overshoot = 0.0;
    double time_over_limit = 0.0;
    std::vector<double> time_to_compliance_per_segment;
    std::int64_t brake_activation_count = 0;
    std::int64_t pulse_count = 0;
    double final_position = 0.0;

    bool operator==(const RunSummary&) const = default;
};

struct RunResult {
    std::vector<TraceRecord> trace;
    RunSummary summary;
};

// Throws ValidationError naming the first offending field.
void validate(const Scenario& scenario, const SimConfig& cfg);

int lanes_at(const std::vector<RoadSegment>& segments, double position);
double throttle_at(const std::vector<ThrottlePoint>& profile, double time);

RunResult run_scenario(const Scenario& scenario, const SimConfig& cfg);

// max_overshoot and time_over_limit use the legal limit of the true lane count.
// time_to_compliance_per_segment has one entry per segment the vehicle entered: the
// time from entry to the first record at or under that segment's limit, or the full
// time spent in the segment if it never complied.
// pulse_count counts rising edges of motor_energized.
RunSummary summarize(const std::vector<TraceRecord>& trace, const supervisor::SpeedLimitTable& table,
                     const Scenario& scenario);

}  // namespace scss::sim
