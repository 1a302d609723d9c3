#include "scss/scenario_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scss/errors.hpp"

namespace scss::io {

namespace {

using Setter = std::function<void(std::string_view value, int line)>;
using Section = std::map<std::string, Setter, std::less<>>;

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view s, int line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        throw ParseError(line, "expected a number, got '" + std::string(s) + "'");
    return v;
}

template <typename Int>
Int parse_int(std::string_view s, int line) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(line, "expected an integer, got '" + std::string(s) + "'");
    return v;
}

bool parse_bool(std::string_view s, int line) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ParseError(line, "expected a boolean, got '" + std::string(s) + "'");
}

// Speed limit in km/h unless suffixed with m/s; stored in m/s rounded to 4 decimals.
double parse_limit(std::string_view s, int line) {
    double scale = 1.0 / 3.6;
    if (s.ends_with("km/h")) {
        s = trim(s.substr(0, s.size() - 4));
    } else if (s.ends_with("m/s")) {
        s = trim(s.substr(0, s.size() - 3));
        scale = 1.0;
    }
    const double mps = parse_double(s, line) * scale;
    return std::round(mps * 1e4) / 1e4;
}

Setter bind(double& field) {
    return [&field](std::string_view v, int line) { field = parse_double(v, line); };
}
Setter bind(int& field) {
    return [&field](std::string_view v, int line) { field = parse_int<int>(v, line); };
}
Setter bind(bool& field) {
    return [&field](std::string_view v, int line) { field = parse_bool(v, line); };
}

struct Parser {
    ScenarioFile out;
    std::map<std::string, Section, std::less<>> sections;
    bool limits_seen = false;
    bool segments_seen = false;
    bool throttle_seen = false;

    Parser() {
        auto& s = out.scenario;
        auto& m = s.overrides;
        sections[""] = {
            {"name", [&s](std::string_view v, int) { s.name = std::string(v); }},
            {"duration", bind(s.duration)},
            {"seed", [&s](std::string_view v, int line) { s.seed = parse_int<std::uint64_t>(v, line); }},
        };
        sections["sim"] = {
            {"plant_dt", bind(out.sim.plant_dt)},
            {"inhibit_drive_on_overspeed", bind(out.sim.inhibit_drive_on_overspeed)},
            {"trace_decimation", bind(out.sim.trace_decimation)},
        };
        auto& v = m.vehicle;
        sections["vehicle"] = {
            {"mass", bind(v.mass)},
            {"wheel_radius", bind(v.wheel_radius)},
            {"drag_coeff", bind(v.drag_coeff)},
            {"rolling_coeff", bind(v.rolling_coeff)},
            {"max_drive_force", bind(v.max_drive_force)},
            {"gravity", bind(v.gravity)},
        };
        auto& a = m.actuator;
        sections["actuator"] = {
            {"motor_stall_torque", bind(a.motor_stall_torque)},
            {"motor_noload_speed", bind(a.motor_noload_speed)},
            {"gear_ratio", bind(a.gear_ratio)},
            {"gear_efficiency", bind(a.gear_efficiency)},
            {"pinion_radius", bind(a.pinion_radius)},
            {"master_piston_area", bind(a.master_piston_area)},
            {"caliper_piston_area", bind(a.caliper_piston_area)},
            {"pad_friction", bind(a.pad_friction)},
            {"rotor_effective_radius", bind(a.rotor_effective_radius)},
            {"piston_preload_force", bind(a.piston_preload_force)},
            {"pressure_gain", bind(a.pressure_gain)},
            {"piston_travel_max", bind(a.piston_travel_max)},
            {"release_time_constant", bind(a.release_time_constant)},
            {"brake_corner_count", bind(a.brake_corner_count)},
        };
        auto& h = m.hall;
        sections["hall"] = {
            {"pulses_per_rev", bind(h.pulses_per_rev)},
            {"timer_resolution", bind(h.timer_resolution)},
            {"estimate_timeout", bind(h.estimate_timeout)},
            {"smoothing_window", bind(h.smoothing_window)},
        };
        auto& l = m.lane_sensor;
        sections["lane_sensor"] = {
            {"sample_period", bind(l.sample_period)},
            {"misclassification_prob", bind(l.misclassification_prob)},
            {"dropout_prob", bind(l.dropout_prob)},
        };
        auto& sv = m.supervisor;
        sections["supervisor"] = {
            {"engage_factor", bind(sv.engage_factor)},
            {"release_factor", bind(sv.release_factor)},
            {"debounce", bind(sv.debounce)},
            {"tick_period", bind(sv.tick_period)},
            {"command_repeat_period", bind(sv.command_repeat_period)},
            {"command_duty_percent", bind(sv.command_duty_percent)},
            {"command_freq_decihertz", bind(sv.command_freq_decihertz)},
        };
        auto& p = m.pulser;
        sections["pulser"] = {
            {"pulse_frequency", bind(p.pulse_frequency)},
            {"duty_fraction", bind(p.duty_fraction)},
            {"watchdog_timeout", bind(p.watchdog_timeout)},
            {"tick_period", bind(p.tick_period)},
        };
        sections["link"] = {
            {"latency", bind(m.link.latency)},
            {"byte_drop_prob", bind(m.link.byte_drop_prob)},
        };
    }

    void entry(const std::string& section, std::string_view key, std::string_view value, int line) {
        auto& s = out.scenario;
        if (section == "limits") {
            if (!limits_seen) s.overrides.limits.entries.clear();
            limits_seen = true;
            if (key == "fallback") {
                s.overrides.limits.fallback_limit = parse_limit(value, line);
            } else {
                s.overrides.limits.entries.push_back({parse_int<int>(key, line), parse_limit(value, line)});
            }
            return;
        }
        if (section == "segments") {
            if (!segments_seen) s.road_segments.clear();
            segments_seen = true;
            s.road_segments.push_back({parse_double(key, line), parse_int<int>(value, line)});
            return;
        }
        if (section == "throttle") {
            if (!throttle_seen) s.throttle_profile.clear();
            throttle_seen = true;
            s.throttle_profile.push_back({parse_double(key, line), parse_double(value, line)});
            return;
        }
        auto sec = sections.find(section);
        if (sec == sections.end()) throw ParseError(line, "unknown section [" + section + "]");
        auto field = sec->second.find(key);
        if (field == sec->second.end())
            throw ParseError(line, "unknown key '" + std::string(key) + "'" +
                                       (section.empty() ? "" : " in [" + section + "]"));
        field->second(value, line);
    }
};

}  // namespace

ScenarioFile parse_scenario(std::string_view text) {
    Parser parser;
    std::string section;
    std::set<std::pair<std::string, std::string>> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view s = raw;
        if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') throw ParseError(line, "unterminated section header");
            section = std::string(trim(s.substr(1, s.size() - 2)));
            if (section != "limits" && section != "segments" && section != "throttle" &&
                !parser.sections.contains(section))
                throw ParseError(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) throw ParseError(line, "expected 'key = value'");
        const auto key = trim(s.substr(0, eq));
        const auto value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError(line, "expected 'key = value'");
        if (!seen.emplace(section, std::string(key)).second)
            throw ParseError(line, "duplicate key '" + std::string(key) + "'");
        parser.entry(section, key, value, line);
    }

    sim::validate(parser.out.scenario, parser.out.sim);
    return parser.out;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError(path.string(), "read failed");
    return parse_scenario(buf.str());
}

std::string format_trace(const std::vector<sim::TraceRecord>& trace) {
    std::string out(kTraceHeader);
    out += '\n';
    char line[512];
    for (const auto& r : trace) {
        std::snprintf(line, sizeof line, "%.6g,%.6g,%.6g,%.6g,%d,%.6g,%d,%d,%.6g,%.6g,%.6g,%.6g\n", r.time,
                      r.position, r.speed_true, r.speed_est, r.lanes_true, r.limit, r.overspeed_active ? 1 : 0,
                      r.motor_energized ? 1 : 0, r.piston_position, r.chamber_pressure, r.brake_torque,
                      r.drive_force);
        out += line;
    }
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace

void write_trace(const std::vector<sim::TraceRecord>& trace, const std::filesystem::path& path) {
    write_file(path, format_trace(trace));
}

std::string format_summary(const sim::RunSummary& s) {
    // nlohmann::json objects are std::map backed, so keys come out sorted.
    nlohmann::json j = {
        {"max_overshoot", s.max_overshoot},
        {"time_over_limit", s.time_over_limit},
        {"time_to_compliance_per_segment", s.time_to_compliance_per_segment},
        {"brake_activation_count", s.brake_activation_count},
        {"pulse_count", s.pulse_count},
        {"final_position", s.final_position},
    };
    return j.dump(2) + "\n";
}

sim::RunSummary parse_summary(std::string_view json_text) {
    const auto j = nlohmann::json::parse(json_text);
    sim::RunSummary s;
    s.max_overshoot = j.at("max_overshoot").get<double>();
    s.time_over_limit = j.at("time_over_limit").get<double>();
    s.time_to_compliance_per_segment = j.at("time_to_compliance_per_segment").get<std::vector<double>>();
    s.brake_activation_count = j.at("brake_activation_count").get<std::int64_t>();
    s.pulse_count = j.at("pulse_count").get<std::int64_t>();
    s.final_position = j.at("final_position").get<double>();
    return s;
}

void write_summary(const sim::RunSummary& summary, const std::filesystem::path& path) {
    write_file(path, format_summary(summary));
}

}  // namespace scss::io
