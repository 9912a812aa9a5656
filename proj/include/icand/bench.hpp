// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include "icand/engine.hpp"
#include "icand/mode.hpp"
#include "icand/stats.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace icand::bench
{

// The two-capability workshop agent every harness run starts from:
// {grasp, place} at v1.0.0.
AgentConfig workshop_agent_config(IdentityMode mode = IdentityMode::Ican);

inline constexpr std::array<char const*, 4> kCheckpointNames = {"pre_canary", "canary_running",
                                                                "promoted", "post_terminal"};

struct CyclesConfig
{
    int cycles = 100;
    IdentityMode mode = IdentityMode::Ican;
    int soak_ticks = 5;
    std::chrono::milliseconds tick_interval{20};
    std::uint64_t metrics_threshold = 0;
};

struct CycleTrace
{
    int cycle = 0;
    // Hash at the four checkpoints, in kCheckpointNames order.
    std::array<std::string, 4> checkpoint_hex8;
    int distinct_hashes = 0;
    bool drift = false; // any two checkpoints differ
};

struct TransitionRow
{
    int cycle = 0;
    int transition_index = 0;
    std::string status_after;
    std::string identity_hash_hex8;
    std::uint64_t timestamp_ns = 0;
};

struct CyclesReport
{
    std::vector<CycleTrace> traces;
    std::vector<TransitionRow> transitions;
    int distinct_hashes_total = 0;
    std::size_t drift_cycles = 0;
    double elapsed_seconds = 0.0;

    std::size_t checkpoint_rows() const
    {
        return traces.size() * 4;
    }
};

// n back-to-back success cycles on a fresh workshop agent, upgrading
// grasp through successive patch versions. Throws if any cycle fails to
// promote.
CyclesReport run_cycles(CyclesConfig const& cfg);

// cycle,checkpoint,identity_hash_hex8
void write_cycles_csv(CyclesReport const& report, std::ostream& out);
// cycle,transition_index,status_after,identity_hash_hex8,timestamp_ns
void write_transitions_csv(CyclesReport const& report, std::ostream& out);

struct CrashConfig
{
    int runs = 50;
    std::vector<int> fault_ticks = {1, 2, 3, 4};
    bool rollback_guard = true;
    std::uint64_t seed = 1;
    int soak_ticks = 5;
    std::chrono::milliseconds tick_interval{20};
};

struct CrashReport
{
    int runs = 0;
    int rolled_back = 0;
    int failed = 0;
    int provisional_cleared = 0;
    int identity_stable = 0;
};

// Fresh engine per run; a metrics fault is injected at a tick drawn from
// fault_ticks. With the rollback guard on, every run must close to
// rolled_back with the provisional map empty; with it off, the fault
// leaves the provisional entry behind and the job lands in failed.
CrashReport run_crash_injection(CrashConfig const& cfg);

struct LatencyConfig
{
    int cycles = 30;
    int resamples = 10000;
    double alpha = 0.05;
    std::uint64_t seed = 42;
    int soak_ticks = 5;
    std::chrono::milliseconds tick_interval{20};
};

struct StageStats
{
    std::string stage;
    std::vector<double> samples_ms;
    stats::BcaInterval ci;
    double p50 = 0.0;
    double p95 = 0.0;
    double p99 = 0.0;
};

struct LatencyReport
{
    // Admission through shadow_passed: the pre-canary stages only.
    StageStats validation_shadow;
    // Admission through promoted: includes the full soak window.
    StageStats full_cycle;
    double configured_soak_ms = 0.0;
};

// Stage latencies over n success cycles, from the jobs' transition-log
// timestamps, with BCa confidence intervals on the means.
LatencyReport measure_latency(LatencyConfig const& cfg);

void print_latency_report(LatencyReport const& report, std::ostream& out);

} // namespace icand::bench
