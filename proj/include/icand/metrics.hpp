// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

namespace icand
{

enum class EventKind
{
    Normal,
    UnsafeActionAttempt,
    RecoveryEscalation,
    ContractViolation,
};

bool is_violation(EventKind k);

// Execution timestamps arrive in two flavors: UTC-aware, and naive local
// stamps from older emitters. Naive stamps are normalized by a configured
// offset before window comparison; treating them as UTC is exactly the bug
// that puts events outside the canary window.
struct EventTime
{
    std::int64_t ns = 0;
    bool utc = true;

    static EventTime utc_ns(std::int64_t ns);
    static EventTime naive_ns(std::int64_t ns);
};

struct ExecutionRecord
{
    EventTime timestamp;
    EventKind kind = EventKind::Normal;
    // Human review can later reclassify these; they count as traffic but
    // never as violations while flagged.
    bool pending_review = false;
};

// Append-only store shared by the executor and the canary monitor.
class ExecutionStore
{
  public:
    void append(ExecutionRecord rec);
    std::vector<ExecutionRecord> snapshot() const;
    std::size_t size() const;

  private:
    mutable std::mutex mutex_;
    std::vector<ExecutionRecord> records_;
};

struct CanaryMetrics
{
    std::int64_t window_start_ns = 0;
    std::uint64_t traffic_count = 0;
    std::uint64_t violation_count = 0;
    // Violations that fell in the window but were withheld pending review.
    std::uint64_t excluded_pending = 0;
};

// Fold the store into window counters. naive_offset_ns is added to naive
// timestamps to bring them onto the UTC clock line.
CanaryMetrics collect_metrics(ExecutionStore const& store, std::int64_t window_start_utc_ns,
                              std::int64_t naive_offset_ns = 0);

enum class TickDecision
{
    Continue,
    PromoteReady,
    RollbackNow,
};

// Strictly-above-threshold violations roll back immediately; the final
// tick with violations at or below threshold reports promote-ready. No
// traffic at all is not an error.
TickDecision evaluate_tick(CanaryMetrics const& m, std::uint64_t threshold, bool final_tick);

using MetricsProvider = std::function<CanaryMetrics(std::int64_t window_start_ns)>;

// Wraps a provider and throws std::domain_error on the Nth call. Used by
// the crash-injection harness to fault the soak loop mid-window.
MetricsProvider fault_injecting_provider(MetricsProvider inner, int fault_tick);

} // namespace icand
