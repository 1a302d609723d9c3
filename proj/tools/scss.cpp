// scss: run speed-control scenarios, fuzz the controller link, inspect defaults.
//
// Exit codes: 0 ok, 1 internal error, 2 parse/validation error, 3 I/O error.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "scss/errors.hpp"
#include "scss/link.hpp"
#include "scss/scenario_io.hpp"
#include "scss/sim.hpp"
#include "scss/supervisor.hpp"

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kInvalid = 2, kIo = 3 };

int cmd_run(const std::string& scenario_path, const std::string& out_path,
            const std::optional<std::string>& summary_path, const std::optional<std::uint64_t>& seed) {
    auto file = scss::io::load_scenario(scenario_path);
    if (seed) file.scenario.seed = *seed;
    const auto result = scss::sim::run_scenario(file.scenario, file.sim);
    scss::io::write_trace(result.trace, out_path);
    if (summary_path) scss::io::write_summary(result.summary, *summary_path);

    const auto& s = result.summary;
    std::printf("%s: %zu records, max overshoot %.3f m/s, %.3f s over limit, %lld activations\n",
                file.scenario.name.c_str(), result.trace.size(), s.max_overshoot, s.time_over_limit,
                static_cast<long long>(s.brake_activation_count));
    return kOk;
}

int cmd_validate(const std::string& scenario_path) {
    const auto file = scss::io::load_scenario(scenario_path);
    std::printf("%s: ok (%.3f s, %zu segments, %zu throttle points)\n", file.scenario.name.c_str(),
                file.scenario.duration, file.scenario.road_segments.size(),
                file.scenario.throttle_profile.size());
    return kOk;
}

int cmd_fuzz(std::size_t bytes, std::uint64_t seed) {
    const auto r = scss::link::fuzz_decoder(bytes, seed);
    std::printf("bytes=%zu messages=%zu errors=%zu max_retained=%zu conservation=%s\n", r.bytes_fed,
                r.messages, r.errors, r.max_retained, r.conservation_held ? "ok" : "VIOLATED");
    return r.conservation_held ? kOk : kInternal;
}

int cmd_table() {
    const auto t = scss::supervisor::default_limit_table();
    std::printf("lanes  limit_mps  limit_kmh\n");
    for (const auto& e : t.entries) std::printf("%5d  %9.4f  %9.1f\n", e.lane_count, e.limit, e.limit * 3.6);
    std::printf("fallback %.4f m/s (%.1f km/h)\n", t.fallback_limit, t.fallback_limit * 3.6);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Speed control security system simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_path;
    std::optional<std::string> summary_path;
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "Run a scenario and write its trace");
    run->add_option("--scenario", scenario_path, "Scenario file")->required();
    run->add_option("--out", out_path, "Trace CSV output path")->required();
    run->add_option("--summary", summary_path, "Summary JSON output path");
    run->add_option("--seed", seed, "Override the scenario seed");

    std::size_t fuzz_bytes = 1'000'000;
    std::uint64_t fuzz_seed = 1;
    auto* fuzz = app.add_subcommand("fuzz-link", "Feed random bytes through the frame decoder");
    fuzz->add_option("--bytes", fuzz_bytes, "Number of random bytes");
    fuzz->add_option("--seed", fuzz_seed, "Random seed");

    bool show = false;
    auto* table = app.add_subcommand("table", "Print the default lane-count speed limit table");
    table->add_flag("--show", show, "Show the table");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Parse and check a scenario without running it");
    validate->add_option("--scenario", validate_path, "Scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalid;
    }

    try {
        if (run->parsed()) return cmd_run(scenario_path, out_path, summary_path, seed);
        if (validate->parsed()) return cmd_validate(validate_path);
        if (fuzz->parsed()) return cmd_fuzz(fuzz_bytes, fuzz_seed);
        if (table->parsed()) return cmd_table();
    } catch (const scss::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kInvalid;
    } catch (const scss::ValidationError& e) {
        std::fprintf(stderr, "invalid scenario: %s\n", e.what());
        return kInvalid;
    } catch (const scss::IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kInternal;
    }
    return kInternal;
}
