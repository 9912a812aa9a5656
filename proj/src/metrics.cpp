// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/metrics.hpp"

#include <stdexcept>
#include <string>

namespace icand
{

bool is_violation(EventKind k)
{
    return k != EventKind::Normal;
}

EventTime EventTime::utc_ns(std::int64_t ns)
{
    return EventTime{ns, true};
}

EventTime EventTime::naive_ns(std::int64_t ns)
{
    return EventTime{ns, false};
}

void ExecutionStore::append(ExecutionRecord rec)
{
    std::lock_guard<std::mutex> lock(mutex_);
    records_.push_back(rec);
}

std::vector<ExecutionRecord> ExecutionStore::snapshot() const
{
    std::lock_guard<std::mutex> lock(mutex_);
    return records_;
}

std::size_t ExecutionStore::size() const
{
    std::lock_guard<std::mutex> lock(mutex_);
    return records_.size();
}

CanaryMetrics collect_metrics(ExecutionStore const& store, std::int64_t window_start_utc_ns,
                              std::int64_t naive_offset_ns)
{
    CanaryMetrics m;
    m.window_start_ns = window_start_utc_ns;
    for (auto const& rec : store.snapshot())
    {
        std::int64_t utc = rec.timestamp.utc ? rec.timestamp.ns : rec.timestamp.ns + naive_offset_ns;
        if (utc < window_start_utc_ns)
            continue;
        ++m.traffic_count;
        if (!is_violation(rec.kind))
            continue;
        if (rec.pending_review)
            ++m.excluded_pending;
        else
            ++m.violation_count;
    }
    return m;
}

TickDecision evaluate_tick(CanaryMetrics const& m, std::uint64_t threshold, bool final_tick)
{
    if (m.violation_count > threshold)
        return TickDecision::RollbackNow;
    return final_tick ? TickDecision::PromoteReady : TickDecision::Continue;
}

MetricsProvider fault_injecting_provider(MetricsProvider inner, int fault_tick)
{
    auto calls = std::make_shared<int>(0);
    return [inner = std::move(inner), fault_tick, calls](std::int64_t window_start_ns) {
        if (++*calls == fault_tick)
        {
            throw std::domain_error("injected metrics fault at tick " +
                                    std::to_string(fault_tick));
        }
        return inner(window_start_ns);
    };
}

} // namespace icand
