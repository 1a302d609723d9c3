#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scss/sim.hpp"

// Scenario files are line-oriented `key = value` documents. Top-level keys (name,
// duration, seed) come before any section header. Sections:
//
//   [sim] [vehicle] [actuator] [hall] [lane_sensor] [supervisor] [pulser] [link]
//       field overrides, keys named after the struct fields
//   [limits]    <lanes> = <speed> [km/h|m/s], fallback = <speed>; bare numbers are km/h
//   [segments]  <start position m> = <lane count>
//   [throttle]  <start time s> = <drive force fraction>
//
// `#` starts a comment. Anything left out keeps its default.

namespace scss::io {

struct ScenarioFile {
    sim::Scenario scenario;
    sim::SimConfig sim;
};

// Throws ParseError (with line number) or ValidationError.
ScenarioFile parse_scenario(std::string_view text);

// Throws IoError when the file cannot be read, otherwise as parse_scenario.
ScenarioFile load_scenario(const std::filesystem::path& path);

inline constexpr std::string_view kTraceHeader =
    "time,position,speed_true,speed_est,lanes_true,limit,overspeed_active,motor_energized,"
    "piston_position,chamber_pressure,brake_torque,drive_force";

std::string format_trace(const std::vector<sim::TraceRecord>& trace);
void write_trace(const std::vector<sim::TraceRecord>& trace, const std::filesystem::path& path);

std::string format_summary(const sim::RunSummary& summary);
sim::RunSummary parse_summary(std::string_view json_text);
void write_summary(const sim::RunSummary& summary, const std::filesystem::path& path);

}  // namespace scss::io
