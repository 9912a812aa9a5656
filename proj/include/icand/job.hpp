// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include "icand/identity.hpp"
#include "icand/semver.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace icand
{

enum class JobStatus
{
    Pending,
    Validating,
    ShadowRunning,
    ShadowPassed,
    CanaryRunning,
    CanaryPromoted,
    Promoted,
    Rejected,
    RolledBack,
    Failed,
};

inline constexpr int kJobStatusCount = 10;

std::string_view to_string(JobStatus s);
std::optional<JobStatus> job_status_from_string(std::string_view s);

// Terminal states absorb: no transition ever leaves one.
bool is_terminal(JobStatus s);

// The standard transition relation: the six success arcs, the two early
// rejections, rollback from any non-terminal state (operator abort or
// fault closure) and failure from any non-terminal state (internal fault).
bool legal_transition(JobStatus from, JobStatus to);

// One row per status change, plus the initial pending row at submit. A
// clean success cycle logs exactly seven rows. identity_hex is the full
// identity hash at the instant the row was written.
struct TransitionLogRow
{
    JobStatus status_after = JobStatus::Pending;
    std::string identity_hex;
    std::uint64_t timestamp_ns = 0; // monotonic clock
};

struct EvolutionJob
{
    EvolutionJob(std::string id_, CapabilityName capability_, SemVer target, SemVer prior)
        : id(std::move(id_)), capability(std::move(capability_)), target_version(target),
          prior_version(prior)
    {
    }

    std::string id;
    CapabilityName capability;
    SemVer target_version;
    // Active version at submit; the value a post-promote revert restores.
    SemVer prior_version;
    JobStatus status = JobStatus::Pending;

    int soak_ticks = 5;
    std::chrono::milliseconds tick_interval{20};
    std::uint64_t metrics_threshold = 0;

    std::int64_t window_start_ns = 0; // UTC, set at canary entry
    std::vector<TransitionLogRow> transition_log;
    std::optional<std::string> failure_reason;

    // Set while a rollback is between clearing the provisional entry and
    // terminalizing, so concurrent closers do not double-fire the hook.
    bool rollback_in_flight = false;
};

} // namespace icand
