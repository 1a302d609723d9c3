#pragma once

// Vehicle longitudinal dynamics and the motor-driven hydraulic brake chain:
// geared DC motor -> pinion -> rack/piston -> compression chamber -> caliper.
// All quantities are SI.

namespace scss::plant {

struct VehicleParams {
    double mass = 1200.0;            // kg
    double wheel_radius = 0.30;      // m
    double drag_coeff = 0.392;       // N s^2/m^2, lumped 0.5*rho*Cd*A
    double rolling_coeff = 0.012;
    double max_drive_force = 4000.0; // N
    double gravity = 9.81;           // m/s^2
};

struct VehicleState {
    double time = 0.0;
    double position = 0.0;
    double speed = 0.0;
    double wheel_angle = 0.0;  // rad, cumulative
    double drive_force_applied = 0.0;
};

struct ActuatorParams {
    double motor_stall_torque = 0.02;   // N m, before the gearbox
    double motor_noload_speed = 1047.0; // rad/s, before the gearbox
    double gear_ratio = 100.0;
    double gear_efficiency = 0.8;
    double pinion_radius = 0.01;          // m
    double master_piston_area = 2e-4;     // m^2
    double caliper_piston_area = 8e-4;    // m^2
    double pad_friction = 0.4;
    double rotor_effective_radius = 0.12; // m
    double piston_preload_force = 10.0;   // N
    double pressure_gain = 5e7;           // Pa per m of piston travel
    double piston_travel_max = 0.02;      // m
    double release_time_constant = 0.15;  // s
    int brake_corner_count = 4;
};

struct BrakeActuatorState {
    double piston_position = 0.0;
    double chamber_pressure = 0.0;
    double output_shaft_speed = 0.0;  // rad/s, after the gearbox
    double brake_torque = 0.0;
    bool motor_energized = false;
};

// Throw ValidationError naming the offending field.
void validate(const VehicleParams& p);
void validate(const ActuatorParams& p);

// Torque at the gearbox output on the linear torque-speed line.
double motor_output_torque(bool energized, double output_shaft_speed, const ActuatorParams& p);

// Gearbox output torque the motor can hold at stall.
inline double stall_output_torque(const ActuatorParams& p) {
    return p.gear_efficiency * p.gear_ratio * p.motor_stall_torque;
}

double brake_torque_from_pressure(double pressure, const ActuatorParams& p);

// Chamber pressure where the stalled motor balances the piston load.
double steady_state_pressure(const ActuatorParams& p);

BrakeActuatorState step_actuator(const BrakeActuatorState& state, bool energized, double dt,
                                 const ActuatorParams& p);

VehicleState step_vehicle(const VehicleState& state, double drive_force, double brake_torque,
                          double dt, const VehicleParams& p);

}  // namespace scss::plant
