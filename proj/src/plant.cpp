#include "scss/plant.hpp"

#include <algorithm>
#include <cmath>

#include "scss/errors.hpp"

namespace scss::plant {

namespace {

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be > 0");
}

}  // namespace

void validate(const VehicleParams& p) {
    require_positive(p.mass, "vehicle.mass");
    require_positive(p.wheel_radius, "vehicle.wheel_radius");
    require_positive(p.drag_coeff, "vehicle.drag_coeff");
    require_positive(p.rolling_coeff, "vehicle.rolling_coeff");
    require_positive(p.max_drive_force, "vehicle.max_drive_force");
    require_positive(p.gravity, "vehicle.gravity");
    if (p.wheel_radius >= 1.0) throw ValidationError("vehicle.wheel_radius", "must be < 1 m");
}

void validate(const ActuatorParams& p) {
    require_positive(p.motor_stall_torque, "actuator.motor_stall_torque");
    require_positive(p.motor_noload_speed, "actuator.motor_noload_speed");
    require_positive(p.gear_ratio, "actuator.gear_ratio");
    require_positive(p.gear_efficiency, "actuator.gear_efficiency");
    require_positive(p.pinion_radius, "actuator.pinion_radius");
    require_positive(p.master_piston_area, "actuator.master_piston_area");
    require_positive(p.caliper_piston_area, "actuator.caliper_piston_area");
    require_positive(p.pad_friction, "actuator.pad_friction");
    require_positive(p.rotor_effective_radius, "actuator.rotor_effective_radius");
    require_positive(p.piston_preload_force, "actuator.piston_preload_force");
    require_positive(p.pressure_gain, "actuator.pressure_gain");
    require_positive(p.piston_travel_max, "actuator.piston_travel_max");
    require_positive(p.release_time_constant, "actuator.release_time_constant");
    if (p.gear_efficiency > 1.0) throw ValidationError("actuator.gear_efficiency", "must be <= 1");
    if (p.brake_corner_count < 1) throw ValidationError("actuator.brake_corner_count", "must be >= 1");
}

double motor_output_torque(bool energized, double output_shaft_speed, const ActuatorParams& p) {
    if (!energized) return 0.0;
    const double fraction = 1.0 - p.gear_ratio * output_shaft_speed / p.motor_noload_speed;
    return stall_output_torque(p) * std::max(0.0, fraction);
}

double brake_torque_from_pressure(double pressure, const ActuatorParams& p) {
    // Each corner clamps two pads.
    const double clamp_force = pressure * p.caliper_piston_area;
    return p.brake_corner_count * 2.0 * p.pad_friction * clamp_force * p.rotor_effective_radius;
}

double steady_state_pressure(const ActuatorParams& p) {
    const double rack_force = stall_output_torque(p) / p.pinion_radius;
    const double pressure = (rack_force - p.piston_preload_force) / p.master_piston_area;
    return std::clamp(pressure, 0.0, p.pressure_gain * p.piston_travel_max);
}

BrakeActuatorState step_actuator(const BrakeActuatorState& state, bool energized, double dt,
                                 const ActuatorParams& p) {
    BrakeActuatorState next = state;
    next.motor_energized = energized;

    if (energized) {
        // Quasi-static: the motor runs at the speed where its torque line meets the load.
        const double load_torque =
            (state.chamber_pressure * p.master_piston_area + p.piston_preload_force) * p.pinion_radius;
        const double speed_fraction = std::max(0.0, 1.0 - load_torque / stall_output_torque(p));
        next.output_shaft_speed = p.motor_noload_speed / p.gear_ratio * speed_fraction;
        next.piston_position = state.piston_position + p.pinion_radius * next.output_shaft_speed * dt;
    } else {
        next.output_shaft_speed = 0.0;
        next.piston_position = state.piston_position * std::exp(-dt / p.release_time_constant);
    }

    next.piston_position = std::clamp(next.piston_position, 0.0, p.piston_travel_max);
    next.chamber_pressure = p.pressure_gain * next.piston_position;
    next.brake_torque = brake_torque_from_pressure(next.chamber_pressure, p);
    return next;
}

VehicleState step_vehicle(const VehicleState& state, double drive_force, double brake_torque,
                          double dt, const VehicleParams& p) {
    drive_force = std::clamp(drive_force, 0.0, p.max_drive_force);
    brake_torque = std::max(0.0, brake_torque);

    const double v = state.speed;
    const double resist = p.drag_coeff * v * v + p.rolling_coeff * p.mass * p.gravity +
                          brake_torque / p.wheel_radius;
    const double accel = (drive_force - resist) / p.mass;

    VehicleState next = state;
    next.time = state.time + dt;
    next.speed = std::max(0.0, v + accel * dt);
    const double advance = v * dt;
    next.position = state.position + advance;
    next.wheel_angle = state.wheel_angle + advance / p.wheel_radius;
    next.drive_force_applied = drive_force;
    return next;
}

}  // namespace scss::plant
