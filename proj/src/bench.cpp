// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/bench.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace icand::bench
{

AgentConfig workshop_agent_config(IdentityMode mode)
{
    AgentConfig cfg;
    cfg.prompt = "You are a careful workshop robot.";
    cfg.env_policy_doc = "env: none\n";
    cfg.runtime_policy_doc = "policy: none\n";
    cfg.persona = "default";
    cfg.runtime_version = "0.1.0";
    cfg.capabilities = {{"grasp", SemVer{1, 0, 0}}, {"place", SemVer{1, 0, 0}}};
    cfg.identity_includes_versions = identity_includes_versions(mode);
    return cfg;
}

namespace
{
// One promoted upgrade of grasp to its next patch version; throws if the
// cycle ends anywhere but promoted.
EvolutionJob run_success_cycle(Engine& engine, int cycle)
{
    CapabilityName grasp("grasp");
    auto active = SemVer::parse(engine.agent_view().active_versions.at("grasp")).value();
    auto submitted = engine.submit_upgrade(grasp, active.next_patch());
    if (submitted.kind != SubmitResult::Kind::Accepted)
    {
        throw std::runtime_error("cycle " + std::to_string(cycle) + ": submit not accepted");
    }
    auto status = engine.run_job(submitted.job_id);
    auto job = engine.job_snapshot(submitted.job_id).value();
    if (status != JobStatus::Promoted)
    {
        throw std::runtime_error("cycle " + std::to_string(cycle) + " ended " +
                                 std::string(to_string(status)) + " (" +
                                 job.failure_reason.value_or("no reason") + ")");
    }
    return job;
}

std::string row_hex_for_status(EvolutionJob const& job, JobStatus status)
{
    for (auto const& row : job.transition_log)
    {
        if (row.status_after == status)
            return row.identity_hex;
    }
    throw std::runtime_error("transition log has no " + std::string(to_string(status)) + " row");
}
} // namespace

CyclesReport run_cycles(CyclesConfig const& cfg)
{
    EngineConfig engine_cfg;
    engine_cfg.default_soak_ticks = cfg.soak_ticks;
    engine_cfg.default_tick_interval = cfg.tick_interval;
    engine_cfg.default_metrics_threshold = cfg.metrics_threshold;
    engine_cfg.worker_threads = 0;
    Engine engine(workshop_agent_config(cfg.mode), engine_cfg);

    CyclesReport report;
    std::set<std::string> all_hashes;
    auto started = std::chrono::steady_clock::now();

    for (int cycle = 1; cycle <= cfg.cycles; ++cycle)
    {
        auto job = run_success_cycle(engine, cycle);

        // The four checkpoints: full hashes for distinctness accounting,
        // first eight hex chars in the CSV.
        std::array<std::string, 4> full = {
            row_hex_for_status(job, JobStatus::Pending),
            row_hex_for_status(job, JobStatus::CanaryRunning),
            row_hex_for_status(job, JobStatus::Promoted),
            engine.identity_hex(),
        };

        CycleTrace trace;
        trace.cycle = cycle;
        std::set<std::string> cycle_hashes;
        for (std::size_t i = 0; i < full.size(); ++i)
        {
            trace.checkpoint_hex8[i] = full[i].substr(0, 8);
            cycle_hashes.insert(full[i]);
            all_hashes.insert(full[i]);
        }
        trace.distinct_hashes = static_cast<int>(cycle_hashes.size());
        trace.drift = trace.distinct_hashes > 1;
        if (trace.drift)
            ++report.drift_cycles;
        report.traces.push_back(std::move(trace));

        for (std::size_t i = 0; i < job.transition_log.size(); ++i)
        {
            auto const& row = job.transition_log[i];
            report.transitions.push_back(TransitionRow{
                cycle, static_cast<int>(i), std::string(to_string(row.status_after)),
                row.identity_hex.substr(0, 8), row.timestamp_ns});
        }
    }

    report.distinct_hashes_total = static_cast<int>(all_hashes.size());
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

void write_cycles_csv(CyclesReport const& report, std::ostream& out)
{
    out << "cycle,checkpoint,identity_hash_hex8\n";
    for (auto const& trace : report.traces)
    {
        for (std::size_t i = 0; i < kCheckpointNames.size(); ++i)
        {
            out << trace.cycle << ',' << kCheckpointNames[i] << ',' << trace.checkpoint_hex8[i]
                << '\n';
        }
    }
}

void write_transitions_csv(CyclesReport const& report, std::ostream& out)
{
    out << "cycle,transition_index,status_after,identity_hash_hex8,timestamp_ns\n";
    for (auto const& row : report.transitions)
    {
        out << row.cycle << ',' << row.transition_index << ',' << row.status_after << ','
            << row.identity_hash_hex8 << ',' << row.timestamp_ns << '\n';
    }
}

CrashReport run_crash_injection(CrashConfig const& cfg)
{
    if (cfg.fault_ticks.empty())
        throw std::invalid_argument("crash injection needs at least one fault tick");

    std::mt19937_64 rng(cfg.seed);
    CrashReport report;
    report.runs = cfg.runs;

    for (int run = 0; run < cfg.runs; ++run)
    {
        int tick = cfg.fault_ticks[rng() % cfg.fault_ticks.size()];

        EngineConfig engine_cfg;
        engine_cfg.default_soak_ticks = cfg.soak_ticks;
        engine_cfg.default_tick_interval = cfg.tick_interval;
        engine_cfg.rollback_guard_enabled = cfg.rollback_guard;
        engine_cfg.worker_threads = 0;

        PipelineHooks hooks;
        hooks.metrics_provider = fault_injecting_provider(
            [](std::int64_t window_start) {
                return CanaryMetrics{window_start, 0, 0, 0};
            },
            tick);

        Engine engine(workshop_agent_config(IdentityMode::Ican), engine_cfg, std::move(hooks));
        auto submitted = engine.submit_upgrade(CapabilityName("grasp"), SemVer{1, 0, 1});
        auto status = engine.run_job(submitted.job_id);

        if (status == JobStatus::RolledBack)
            ++report.rolled_back;
        if (status == JobStatus::Failed)
            ++report.failed;
        if (engine.agent_view().provisional_versions.empty())
            ++report.provisional_cleared;
        if (engine.identity() == engine.baseline_identity())
            ++report.identity_stable;
    }
    return report;
}

LatencyReport measure_latency(LatencyConfig const& cfg)
{
    EngineConfig engine_cfg;
    engine_cfg.default_soak_ticks = cfg.soak_ticks;
    engine_cfg.default_tick_interval = cfg.tick_interval;
    engine_cfg.worker_threads = 0;
    Engine engine(workshop_agent_config(IdentityMode::Ican), engine_cfg);

    LatencyReport report;
    report.validation_shadow.stage = "val_plus_shadow";
    report.full_cycle.stage = "full_plus_soak";
    report.configured_soak_ms =
        static_cast<double>(cfg.soak_ticks) * static_cast<double>(cfg.tick_interval.count());

    for (int cycle = 1; cycle <= cfg.cycles; ++cycle)
    {
        auto job = run_success_cycle(engine, cycle);
        auto t_submit = job.transition_log.front().timestamp_ns;
        std::uint64_t t_shadow = 0;
        std::uint64_t t_promoted = 0;
        for (auto const& row : job.transition_log)
        {
            if (row.status_after == JobStatus::ShadowPassed)
                t_shadow = row.timestamp_ns;
            if (row.status_after == JobStatus::Promoted)
                t_promoted = row.timestamp_ns;
        }
        report.validation_shadow.samples_ms.push_back(
            static_cast<double>(t_shadow - t_submit) / 1e6);
        report.full_cycle.samples_ms.push_back(static_cast<double>(t_promoted - t_submit) / 1e6);
    }

    for (auto* stage : {&report.validation_shadow, &report.full_cycle})
    {
        stage->ci = stats::bca_interval(stage->samples_ms, cfg.resamples, cfg.alpha, cfg.seed);
        stage->p50 = stats::percentile(stage->samples_ms, 0.50);
        stage->p95 = stats::percentile(stage->samples_ms, 0.95);
        stage->p99 = stats::percentile(stage->samples_ms, 0.99);
    }
    return report;
}

void print_latency_report(LatencyReport const& report, std::ostream& out)
{
    for (auto const* stage : {&report.validation_shadow, &report.full_cycle})
    {
        out << stage->stage << " n=" << stage->samples_ms.size() << " mean_ms=" << stage->ci.mean
            << " ci_lower_ms=" << stage->ci.lower << " ci_upper_ms=" << stage->ci.upper
            << " p50_ms=" << stage->p50 << " p95_ms=" << stage->p95 << " p99_ms=" << stage->p99
            << "\n";
    }
    out << "configured_soak_ms=" << report.configured_soak_ms << "\n";
}

} // namespace icand::bench
