// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/job.hpp"

namespace icand
{

std::string_view to_string(JobStatus s)
{
    switch (s)
    {
    case JobStatus::Pending:
        return "pending";
    case JobStatus::Validating:
        return "validating";
    case JobStatus::ShadowRunning:
        return "shadow_running";
    case JobStatus::ShadowPassed:
        return "shadow_passed";
    case JobStatus::CanaryRunning:
        return "canary_running";
    case JobStatus::CanaryPromoted:
        return "canary_promoted";
    case JobStatus::Promoted:
        return "promoted";
    case JobStatus::Rejected:
        return "rejected";
    case JobStatus::RolledBack:
        return "rolled_back";
    case JobStatus::Failed:
        return "failed";
    }
    return "unknown";
}

std::optional<JobStatus> job_status_from_string(std::string_view s)
{
    for (int i = 0; i < kJobStatusCount; ++i)
    {
        auto status = static_cast<JobStatus>(i);
        if (to_string(status) == s)
            return status;
    }
    return std::nullopt;
}

bool is_terminal(JobStatus s)
{
    switch (s)
    {
    case JobStatus::Promoted:
    case JobStatus::Rejected:
    case JobStatus::RolledBack:
    case JobStatus::Failed:
        return true;
    default:
        return false;
    }
}

bool legal_transition(JobStatus from, JobStatus to)
{
    if (is_terminal(from))
        return false;
    // The fault and abort families cover every non-terminal source.
    if (to == JobStatus::RolledBack || to == JobStatus::Failed)
        return true;
    switch (from)
    {
    case JobStatus::Pending:
        return to == JobStatus::Validating;
    case JobStatus::Validating:
        return to == JobStatus::ShadowRunning || to == JobStatus::Rejected;
    case JobStatus::ShadowRunning:
        return to == JobStatus::ShadowPassed || to == JobStatus::Rejected;
    case JobStatus::ShadowPassed:
        return to == JobStatus::CanaryRunning;
    case JobStatus::CanaryRunning:
        return to == JobStatus::CanaryPromoted;
    case JobStatus::CanaryPromoted:
        return to == JobStatus::Promoted;
    default:
        return false;
    }
}

} // namespace icand
