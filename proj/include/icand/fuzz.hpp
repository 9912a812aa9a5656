// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include "icand/mode.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace icand::fuzz
{

struct FuzzConfig
{
    std::uint64_t seed_count = 1000;
    std::uint64_t first_seed = 0;
    IdentityMode mode = IdentityMode::Ican;
    int soak_ticks = 3;
};

struct FuzzReport
{
    std::uint64_t seeds_run = 0;
    std::uint64_t violating_seeds = 0;
    std::uint64_t seeds_reaching_canary = 0;
    // status name -> times observed across all seed traces
    std::map<std::string, std::uint64_t> status_coverage;
    // failure-path branch -> times taken
    std::map<std::string, std::uint64_t> branch_coverage;
    std::vector<std::string> violation_details; // capped at a few entries

    bool all_statuses_covered() const;
    bool all_branches_covered() const;
};

// Drive seed_count randomized workloads through a real engine, one
// deterministic workload per seed, and check the identity / state /
// version-map invariants on every observed transition. Each seed decides
// its registry, upgrade targets, validator and shadow verdicts, synthetic
// per-tick metrics and fault schedule up front from its own generator, so
// a seed's trace is a pure function of (seed, mode).
FuzzReport run_fuzz(FuzzConfig const& cfg);

// Printable trace of one seed's workload; byte-identical across runs for
// the same (seed, mode, soak_ticks).
std::string fuzz_trace(std::uint64_t seed, IdentityMode mode, int soak_ticks = 3);

} // namespace icand::fuzz
