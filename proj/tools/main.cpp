// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.
//
// Command-line harness for the evolution engine: cycle traces, crash
// injection, latency measurement, reachability checking, fuzzing and the
// HTTP control surface.

#include "icand/bench.hpp"
#include "icand/fuzz.hpp"
#include "icand/http_api.hpp"
#include "icand/model.hpp"
#include "icand/stats.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace
{

icand::IdentityMode parse_mode(std::string const& text)
{
    auto mode = icand::identity_mode_from_string(text);
    if (!mode)
        throw CLI::ValidationError("--mode", "expected 'ican' or 'strawman'");
    return *mode;
}

std::ofstream open_out(std::filesystem::path const& dir, char const* name)
{
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string());
    std::cout << "writing " << path.string() << "\n";
    return out;
}

int run_cycles_cmd(int n, std::string const& mode_text, int soak_ticks, int tick_ms,
                   std::string const& out_dir)
{
    icand::bench::CyclesConfig cfg;
    cfg.cycles = n;
    cfg.mode = parse_mode(mode_text);
    cfg.soak_ticks = soak_ticks;
    cfg.tick_interval = std::chrono::milliseconds(tick_ms);
    auto report = icand::bench::run_cycles(cfg);

    {
        auto out = open_out(out_dir, "cycles.csv");
        icand::bench::write_cycles_csv(report, out);
    }
    {
        auto out = open_out(out_dir, "transitions.csv");
        icand::bench::write_transitions_csv(report, out);
    }

    std::cout << "cycles=" << report.traces.size() << " mode=" << mode_text
              << " checkpoint_rows=" << report.checkpoint_rows()
              << " distinct_hashes=" << report.distinct_hashes_total
              << " drift_cycles=" << report.drift_cycles
              << " elapsed_s=" << report.elapsed_seconds << "\n";
    return 0;
}

int run_crash_cmd(int runs, std::vector<int> const& ticks, bool disable_guard,
                  std::uint64_t seed, int soak_ticks, int tick_ms)
{
    icand::bench::CrashConfig cfg;
    cfg.runs = runs;
    cfg.fault_ticks = ticks;
    cfg.rollback_guard = !disable_guard;
    cfg.seed = seed;
    cfg.soak_ticks = soak_ticks;
    cfg.tick_interval = std::chrono::milliseconds(tick_ms);
    auto report = icand::bench::run_crash_injection(cfg);

    std::cout << "runs=" << report.runs << " rolled_back=" << report.rolled_back
              << " failed=" << report.failed
              << " provisional_cleared=" << report.provisional_cleared
              << " identity_stable=" << report.identity_stable
              << " guard=" << (disable_guard ? "off" : "on") << "\n";
    return 0;
}

int run_latency_cmd(int n, int resamples, std::uint64_t seed, int soak_ticks, int tick_ms,
                    double sigma, double delta)
{
    icand::bench::LatencyConfig cfg;
    cfg.cycles = n;
    cfg.resamples = resamples;
    cfg.seed = seed;
    cfg.soak_ticks = soak_ticks;
    cfg.tick_interval = std::chrono::milliseconds(tick_ms);
    auto report = icand::bench::measure_latency(cfg);
    icand::bench::print_latency_report(report, std::cout);

    double raw = icand::stats::power_sample_size_raw(0.05, 0.80, sigma, delta);
    int needed = icand::stats::power_sample_size(0.05, 0.80, sigma, delta);
    std::cout << "power_sample_size alpha=0.05 power=0.80 sigma_ms=" << sigma
              << " delta_ms=" << delta << " raw=" << raw << " n=" << needed << "\n";
    return 0;
}

int run_verify_cmd(int names, int versions, std::string const& mode_text,
                   std::string const& out_dir)
{
    icand::model::ModelConfig cfg;
    cfg.name_count = names;
    cfg.version_count = versions;
    cfg.mode = parse_mode(mode_text);
    auto report = icand::model::enumerate_reachable(cfg);
    auto rows = icand::model::invariant_rows(report);

    {
        auto out = open_out(out_dir, "verify.csv");
        out << "invariant,states,depth,violations\n";
        for (auto const& row : rows)
        {
            out << row.invariant << ',' << row.states << ',' << row.depth << ','
                << row.violations << '\n';
        }
    }

    std::cout << "states_explored=" << report.states_explored
              << " max_depth=" << report.max_depth
              << " violations=" << report.violations.size() << "\n";
    for (auto const& row : rows)
    {
        std::cout << "invariant " << row.invariant << " violations=" << row.violations << "\n";
    }
    for (auto const& violation : report.violations)
    {
        if (violation.trace.empty())
            continue;
        std::cout << "counterexample (" << violation.invariant << "):\n";
        for (auto const& line : violation.trace)
            std::cout << "  " << line << "\n";
        break; // one trace is enough for the summary
    }
    return report.ok() ? 0 : 1;
}

int run_fuzz_cmd(std::uint64_t seeds, std::string const& mode_text, int soak_ticks,
                 std::uint64_t first_seed)
{
    icand::fuzz::FuzzConfig cfg;
    cfg.seed_count = seeds;
    cfg.first_seed = first_seed;
    cfg.mode = parse_mode(mode_text);
    cfg.soak_ticks = soak_ticks;

    auto started = std::chrono::steady_clock::now();
    auto report = icand::fuzz::run_fuzz(cfg);
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                         .count();

    std::cout << "seeds=" << report.seeds_run << " violating=" << report.violating_seeds
              << " reached_canary=" << report.seeds_reaching_canary << " statuses_covered="
              << (report.all_statuses_covered() ? "yes" : "no") << " branches_covered="
              << (report.all_branches_covered() ? "yes" : "no") << " elapsed_s=" << elapsed
              << "\n";
    for (auto const& [status, count] : report.status_coverage)
        std::cout << "status " << status << "=" << count << "\n";
    for (auto const& [branch, count] : report.branch_coverage)
        std::cout << "branch " << branch << "=" << count << "\n";
    for (auto const& detail : report.violation_details)
        std::cout << "violation " << detail << "\n";
    return report.violating_seeds == 0 ? 0 : 1;
}

int run_serve_cmd(std::string const& host, int port, std::string const& mode_text,
                  int soak_ticks, int tick_ms)
{
    icand::IdentityMode mode;
    if (!mode_text.empty())
        mode = parse_mode(mode_text);
    else
        mode = icand::identity_includes_versions_from_env() ? icand::IdentityMode::Strawman
                                                            : icand::IdentityMode::Ican;

    icand::EngineConfig engine_cfg;
    engine_cfg.default_soak_ticks = soak_ticks;
    engine_cfg.default_tick_interval = std::chrono::milliseconds(tick_ms);
    icand::Engine engine(icand::bench::workshop_agent_config(mode), engine_cfg);
    icand::ApiServer server(engine);

    std::cout << "listening on " << host << ":" << port << " mode=" << to_string(mode)
              << " identity=" << engine.identity_hex() << "\n";
    if (!server.listen(host, port))
    {
        std::cerr << "failed to bind " << host << ":" << port << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"identity-stable canary deployment engine"};
    app.require_subcommand(1);

    // cycles
    int cycles_n = 100;
    std::string cycles_mode = "ican";
    int cycles_soak = 5;
    int cycles_tick_ms = 20;
    std::string cycles_out = ".";
    auto* cycles = app.add_subcommand("cycles", "run back-to-back upgrade cycles");
    cycles->add_option("--n", cycles_n, "number of cycles");
    cycles->add_option("--mode", cycles_mode, "ican or strawman");
    cycles->add_option("--soak-ticks", cycles_soak, "soak ticks per canary");
    cycles->add_option("--tick-ms", cycles_tick_ms, "tick interval in ms");
    cycles->add_option("--out", cycles_out, "output directory for CSVs");

    // crash
    int crash_runs = 50;
    std::vector<int> crash_ticks = {1, 2, 3, 4};
    bool crash_disable_guard = false;
    std::uint64_t crash_seed = 1;
    int crash_soak = 5;
    int crash_tick_ms = 20;
    auto* crash = app.add_subcommand("crash", "inject mid-soak faults and count recoveries");
    crash->add_option("--runs", crash_runs, "number of injected runs");
    crash->add_option("--ticks", crash_ticks, "fault ticks to draw from")->delimiter(',');
    crash->add_flag("--disable-guard", crash_disable_guard,
                    "skip rollback closure on faults (control experiment)");
    crash->add_option("--seed", crash_seed, "rng seed for tick choice");
    crash->add_option("--soak-ticks", crash_soak, "soak ticks per canary");
    crash->add_option("--tick-ms", crash_tick_ms, "tick interval in ms");

    // latency
    int latency_n = 30;
    int latency_resamples = 10000;
    std::uint64_t latency_seed = 42;
    int latency_soak = 5;
    int latency_tick_ms = 20;
    double latency_sigma = 1.06;
    double latency_delta = 2.0;
    auto* latency = app.add_subcommand("latency", "measure stage latencies with bootstrap CIs");
    latency->add_option("--n", latency_n, "number of measured cycles");
    latency->add_option("--resamples", latency_resamples, "bootstrap resamples");
    latency->add_option("--seed", latency_seed, "bootstrap rng seed");
    latency->add_option("--soak-ticks", latency_soak, "soak ticks per canary");
    latency->add_option("--tick-ms", latency_tick_ms, "tick interval in ms");
    latency->add_option("--sigma", latency_sigma, "stddev (ms) for the power report");
    latency->add_option("--delta", latency_delta, "effect size (ms) for the power report");

    // verify
    int verify_names = 2;
    int verify_versions = 3;
    std::string verify_mode = "ican";
    std::string verify_out = ".";
    auto* verify = app.add_subcommand("verify", "exhaustive reachability + invariant check");
    verify->add_option("--names", verify_names, "capability names in the model");
    verify->add_option("--versions", verify_versions, "versions per name");
    verify->add_option("--mode", verify_mode, "ican or strawman");
    verify->add_option("--out", verify_out, "output directory for CSVs");

    // fuzz
    std::uint64_t fuzz_seeds = 10000;
    std::string fuzz_mode = "ican";
    int fuzz_soak = 3;
    std::uint64_t fuzz_first = 0;
    auto* fuzz = app.add_subcommand("fuzz", "seeded randomized pipeline workloads");
    fuzz->add_option("--seeds", fuzz_seeds, "number of seeds");
    fuzz->add_option("--mode", fuzz_mode, "ican or strawman");
    fuzz->add_option("--soak-ticks", fuzz_soak, "soak ticks per canary");
    fuzz->add_option("--first-seed", fuzz_first, "first seed value");

    // serve
    std::string serve_host = "127.0.0.1";
    int serve_port = 8080;
    std::string serve_mode;
    int serve_soak = 5;
    int serve_tick_ms = 20;
    auto* serve = app.add_subcommand("serve", "run the HTTP control surface");
    serve->add_option("--host", serve_host, "bind host");
    serve->add_option("--port", serve_port, "bind port");
    serve->add_option("--mode", serve_mode,
                      "ican or strawman (default: ican, or env "
                      "ICAND_IDENTITY_INCLUDES_VERSIONS/IDENTITY_INCLUDES_VERSIONS)");
    serve->add_option("--soak-ticks", serve_soak, "default soak ticks per canary");
    serve->add_option("--tick-ms", serve_tick_ms, "default tick interval in ms");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (cycles->parsed())
            return run_cycles_cmd(cycles_n, cycles_mode, cycles_soak, cycles_tick_ms, cycles_out);
        if (crash->parsed())
            return run_crash_cmd(crash_runs, crash_ticks, crash_disable_guard, crash_seed,
                                 crash_soak, crash_tick_ms);
        if (latency->parsed())
            return run_latency_cmd(latency_n, latency_resamples, latency_seed, latency_soak,
                                   latency_tick_ms, latency_sigma, latency_delta);
        if (verify->parsed())
            return run_verify_cmd(verify_names, verify_versions, verify_mode, verify_out);
        if (fuzz->parsed())
            return run_fuzz_cmd(fuzz_seeds, fuzz_mode, fuzz_soak, fuzz_first);
        if (serve->parsed())
            return run_serve_cmd(serve_host, serve_port, serve_mode, serve_soak, serve_tick_ms);
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
