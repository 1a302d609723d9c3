// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "scss/actuator_ctrl.hpp"
#include "scss/link.hpp"
#include "scss/plant.hpp"
#include "scss/scenario_io.hpp"
#include "scss/sensors.hpp"
#include "scss/sim.hpp"
#include "scss/supervisor.hpp"

using namespace scss;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("%s  %d %-22s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    if (!pass) ++failures;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void closed_loop_compliance() {
    sim::Scenario s;
    s.name = "full_throttle_2lane";
    s.duration = 60.0;
    s.seed = 42;
    s.road_segments = {{0.0, 2}};
    s.throttle_profile = {{0.0, 1.0}};
    s.overrides.lane_sensor.misclassification_prob = 0.0;
    s.overrides.lane_sensor.dropout_prob = 0.0;

    const auto start = std::chrono::steady_clock::now();
    const auto r = sim::run_scenario(s, {});
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const double bound = supervisor::resolve_limit(2, s.overrides.limits) + 0.5;
    const bool activated = std::any_of(r.trace.begin(), r.trace.end(),
                                       [](const auto& rec) { return rec.overspeed_active; });
    // Settled: the last record over the bound is followed by at least one record under it.
    std::size_t last_violation = r.trace.size();
    for (std::size_t i = 0; i < r.trace.size(); ++i)
        if (r.trace[i].speed_true > bound) last_violation = i;
    const bool never_violated = last_violation == r.trace.size();
    const bool settled = never_violated || last_violation + 1 < r.trace.size();
    double peak_late = 0.0;
    for (const auto& rec : r.trace)
        if (rec.time >= 30.0) peak_late = std::max(peak_late, rec.speed_true);
    report(1, "closed-loop compliance", activated && settled,
           fmt("activations=%lld bound=%.3f m/s last_excursion_t=%.2f s peak_after_30s=%.3f m/s",
               static_cast<long long>(r.summary.brake_activation_count), bound,
               never_violated ? 0.0 : r.trace[last_violation].time, peak_late));
    report(1, "runtime under 5 s", wall < 5.0, fmt("60 s simulated in %.3f s", wall));
}

void estimator_accuracy() {
    const double v = 20.0;
    const plant::VehicleParams vehicle;
    double worst = 0.0;
    {
        sensors::HallConfig cfg;
        sensors::PulseLog log;
        for (int k = 1; k <= 2000; ++k) {
            const double t = k * 0.001;
            log = sensors::emit_pulses(std::move(log), v * t / vehicle.wheel_radius, t, cfg);
            if (log.size() < 3) continue;
            const double est = sensors::estimate_speed(log, t, vehicle.wheel_radius, cfg);
            worst = std::max(worst, std::abs(est - v) / v);
        }
    }
    double worst_exact = 0.0;
    {
        sensors::HallConfig cfg;
        cfg.timer_resolution = 1e-12;
        cfg.smoothing_window = 1;
        sensors::PulseLog log;
        for (int k = 1; k <= 2000; ++k) {
            const double t = k * 0.001;
            const auto before = log.size();
            log = sensors::emit_pulses(std::move(log), v * t / vehicle.wheel_radius, t, cfg);
            if (log.size() == before || log.size() < 2) continue;
            const double at = log.timestamp(log.size() - 1, cfg);
            worst_exact = std::max(worst_exact, std::abs(sensors::estimate_speed(log, at, vehicle.wheel_radius, cfg) - v) / v);
        }
    }
    report(2, "estimator accuracy", worst < 0.005 && worst_exact < 1e-9,
           fmt("worst_rel_err=%.2e unquantized_worst=%.2e", worst, worst_exact));
}

void actuator_fixed_point() {
    const plant::ActuatorParams p;
    const double closed = plant::steady_state_pressure(p);
    auto hold = [&p](double seconds) {
        plant::BrakeActuatorState s;
        const auto steps = static_cast<int>(std::llround(seconds / 0.001));
        for (int k = 0; k < steps; ++k) s = plant::step_actuator(s, true, 0.001, p);
        return s.chamber_pressure;
    };
    const double at5 = hold(5.0), long_run = hold(120.0);
    const bool pass = std::abs(closed - 7.5e5) / 7.5e5 < 0.01 && std::abs(long_run - closed) / closed < 1e-6 &&
                      std::abs(at5 - closed) / closed < 0.01;
    report(3, "actuator fixed point", pass,
           fmt("closed_form=%.1f Pa long_run=%.1f Pa after_5s=%.1f Pa", closed, long_run, at5));
}

void pulser_duty() {
    actuator::PulserConfig cfg;
    auto s = actuator::handle_message({}, link::BrakeCmd{0, true, 60, 50}, 0.0);
    std::uint8_t seq = 1;
    std::vector<bool> on;
    for (int k = 0; k < 10000; ++k) {
        const double now = k * cfg.tick_period;
        if (k % 100 == 0) s = actuator::handle_message(s, link::Heartbeat{seq++, static_cast<std::uint32_t>(k)}, now);
        auto out = actuator::update_pulser(s, cfg, now);
        s = out.state;
        on.push_back(out.motor_energized);
    }
    const double fraction = std::count(on.begin(), on.end(), true) / double(on.size());
    bool every_period_off = true;
    for (std::size_t p = 0; p < on.size(); p += 200)
        every_period_off &= std::find(on.begin() + p, on.begin() + p + 200, false) != on.begin() + p + 200;
    report(4, "pulser duty", std::abs(fraction - 0.6) <= 0.006 && every_period_off,
           fmt("energized_fraction=%.4f all_periods_release=%s", fraction, every_period_off ? "yes" : "no"));
}

std::vector<link::Message> sample_messages() {
    std::vector<link::Message> out;
    for (int seq : {0, 1, 127, 255})
        for (bool active : {false, true})
            for (int duty : {0, 60, 100})
                for (int freq : {0, 50, 255})
                    out.push_back(link::BrakeCmd{static_cast<std::uint8_t>(seq), active,
                                                 static_cast<std::uint8_t>(duty), static_cast<std::uint8_t>(freq)});
    for (int seq : {0, 255})
        for (std::uint32_t ms : {0u, 1u, 123456u, 0xFFFFFFFFu}) out.push_back(link::Heartbeat{static_cast<std::uint8_t>(seq), ms});
    for (int seq = 0; seq < 256; ++seq) out.push_back(link::Ack{static_cast<std::uint8_t>(seq)});
    return out;
}

void protocol() {
    const auto messages = sample_messages();
    std::size_t round_trip_ok = 0;
    for (const auto& m : messages) {
        const auto r = link::decode_stream({}, link::encode_frame(m));
        round_trip_ok += r.messages.size() == 1 && r.messages[0] == m && r.errors == 0;
    }

    bool fuzz_ok = true;
    link::FuzzReport fuzz;
    try {
        fuzz = link::fuzz_decoder(1'000'000, 2024);
        fuzz_ok = fuzz.conservation_held && fuzz.bytes_fed == 1'000'000;
    } catch (...) {
        fuzz_ok = false;
    }

    std::mt19937_64 gen(61);
    const int trials = 10'000;
    int recovered = 0;
    for (int t = 0; t < trials; ++t) {
        link::Bytes noise(gen() % 48);
        for (auto& b : noise) b = static_cast<std::uint8_t>(gen());
        auto bad = link::encode_frame(messages[gen() % messages.size()]);
        bad[1 + gen() % (bad.size() - 1)] ^= static_cast<std::uint8_t>(1u << (gen() % 8));
        const auto& target = messages[gen() % messages.size()];
        const auto good = link::encode_frame(target);
        link::Bytes stream = noise;
        stream.insert(stream.end(), bad.begin(), bad.end());
        stream.insert(stream.end(), good.begin(), good.end());
        const auto r = link::decode_stream({}, stream);
        recovered += std::find(r.messages.begin(), r.messages.end(), target) != r.messages.end();
    }
    const double rate = recovered / double(trials);
    report(5, "protocol", round_trip_ok == messages.size() && fuzz_ok && rate >= 0.99,
           fmt("round_trip=%zu/%zu fuzz_bytes=%zu fuzz_frames=%zu resync=%.4f", round_trip_ok, messages.size(),
               fuzz.bytes_fed, fuzz.messages, rate));
}

// Supervisor -> codec -> channel -> pulser with heartbeat frames withheld after `stop`.
// Returns the lateness of the last energized tick past (last heartbeat + timeout).
double watchdog_trial(double stop, double latency) {
    const auto table = supervisor::default_limit_table();
    const supervisor::SupervisorConfig sup_cfg;
    const actuator::PulserConfig pulser_cfg;
    auto sup = supervisor::initial_state(table);
    actuator::PulserState pulser;
    link::Channel channel({latency, 0.0, 7});
    link::Bytes acc;
    double last_heartbeat = -1.0, last_energized = -1.0;

    for (int k = 0; k < 6000; ++k) {
        const double now = k * 0.001;
        const auto delivered = channel.step(now);
        auto decoded = link::decode_stream(acc, delivered);
        acc = std::move(decoded.accumulator);
        for (const auto& m : decoded.messages) {
            if (std::holds_alternative<link::Heartbeat>(m)) last_heartbeat = now;
            pulser = actuator::handle_message(pulser, m, now);
        }
        auto out = actuator::update_pulser(pulser, pulser_cfg, now);
        pulser = out.state;
        if (out.motor_energized) last_energized = now;

        if (k % 10 == 0) {
            std::optional<sensors::LaneObservation> obs;
            if (k == 0) obs = sensors::LaneObservation{2, 0.0};
            auto tick = supervisor::update_supervisor(sup, sup_cfg, table, 16.0, obs, now);
            sup = tick.state;
            for (const auto& m : tick.messages) {
                if (std::holds_alternative<link::Heartbeat>(m) && now >= stop) continue;
                channel.submit(link::encode_frame(m), now);
            }
        }
    }
    if (last_energized < 0.0 || last_heartbeat < 0.0) return 1e9;  // intervention never happened
    return last_energized - (last_heartbeat + pulser_cfg.watchdog_timeout);
}

void watchdog() {
    std::mt19937_64 gen(81);
    std::uniform_real_distribution<double> stop(1.0, 4.0);
    double worst = -1e9;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) worst = std::max(worst, watchdog_trial(stop(gen), t % 2 ? 0.002 : 0.0));
    report(6, "watchdog", worst <= 0.001 + 1e-9,
           fmt("worst_lateness=%.4f s over %d trials (allowed 0.001)", worst, trials));
}

void determinism() {
    sim::Scenario s;
    s.name = "determinism";
    s.duration = 40.0;
    s.seed = 1234;
    s.road_segments = {{0.0, 4}, {250.0, 2}, {500.0, 1}, {650.0, 3}};
    s.throttle_profile = {{0.0, 0.9}, {20.0, 0.5}};
    s.overrides.link.byte_drop_prob = 0.01;
    auto once = [&s] {
        const auto r = sim::run_scenario(s, {});
        return std::pair{io::format_trace(r.trace), io::format_summary(r.summary)};
    };
    const auto a = once(), b = once();
    report(7, "determinism", a == b,
           fmt("csv_bytes=%zu json_bytes=%zu identical=%s", a.first.size(), a.second.size(), a == b ? "yes" : "no"));
}

void hysteresis_debounce() {
    std::mt19937_64 gen(91);
    const auto table = supervisor::default_limit_table();
    const supervisor::SupervisorConfig cfg;
    const double limit = supervisor::resolve_limit(2, table);
    const double engage = cfg.engage_factor * limit, release = cfg.release_factor * limit;
    const int debounce_ticks = static_cast<int>(std::llround(cfg.debounce / cfg.tick_period));
    std::normal_distribution<double> jitter(0.0, 0.15);
    std::uniform_real_distribution<double> jump(0.85, 1.2), band(release + 1e-6, engage - 1e-6);
    std::bernoulli_distribution do_jump(0.01), in_band_phase(0.5);

    int trials = 300, violations = 0, edges_seen = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> speeds;
        double v = limit;
        bool band_phase = false;
        for (int i = 0; i < 3000; ++i) {
            if (i % 500 == 0) band_phase = in_band_phase(gen);
            if (band_phase) v = band(gen);
            else v = do_jump(gen) ? limit * jump(gen) : std::max(0.0, v + jitter(gen));
            speeds.push_back(v);
        }
        auto state = supervisor::initial_state(table);
        bool prev = false;
        int last_release = -1;
        for (int i = 0; i < static_cast<int>(speeds.size()); ++i) {
            std::optional<sensors::LaneObservation> obs;
            if (i == 0) obs = sensors::LaneObservation{2, 0.0};
            state = supervisor::update_supervisor(state, cfg, table, speeds[i], obs, i * cfg.tick_period).state;
            const bool now_active = state.overspeed_active;
            const bool inside = speeds[i] > release && speeds[i] <= engage;
            if (now_active != prev) {
                ++edges_seen;
                if (inside) ++violations;  // chatter: state changed on an in-band sample
                if (now_active) {
                    bool qualified = i - debounce_ticks > last_release;
                    for (int j = std::max(0, i - debounce_ticks); j <= i; ++j) qualified &= speeds[j] > engage;
                    if (i < debounce_ticks || !qualified) ++violations;
                } else {
                    last_release = i;
                }
            }
            prev = now_active;
        }
    }
    report(8, "hysteresis/debounce", violations == 0 && edges_seen > 0,
           fmt("trials=%d edges=%d violations=%d", trials, edges_seen, violations));
}

}  // namespace

int main() {
    closed_loop_compliance();
    estimator_accuracy();
    actuator_fixed_point();
    pulser_duty();
    protocol();
    watchdog();
    determinism();
    hysteresis_debounce();
    std::printf("%s (%d failing)\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
    return failures == 0 ? 0 : 1;
}
