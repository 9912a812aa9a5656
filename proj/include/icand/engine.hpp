// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include "icand/agent.hpp"
#include "icand/audit.hpp"
#include "icand/job.hpp"
#include "icand/metrics.hpp"
#include "icand/writeset.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace icand
{

// Caller-supplied pipeline behavior. Empty members fall back to defaults:
// validator and shadow replay accept, metrics come from the engine's
// execution store, promote/rollback notifications are skipped.
struct PipelineHooks
{
    std::function<bool(CapabilityName const&, SemVer const&)> validator;
    std::function<bool(CapabilityName const&, SemVer const&)> shadow_replay;
    MetricsProvider metrics_provider;
    // Runs after the canary-promoted decision and before the atomic flip;
    // a throw here still rolls back cleanly.
    std::function<void(CapabilityName const&, SemVer const&)> on_promote;
    std::function<void(CapabilityName const&, std::string const&)> on_rollback;
};

struct EngineConfig
{
    int default_soak_ticks = 5;
    std::chrono::milliseconds default_tick_interval{20};
    std::uint64_t default_metrics_threshold = 0;
    // Off reproduces the unguarded failure mode: a fault mid-soak leaves
    // the provisional entry behind. Only tests and the crash harness
    // should ever clear this.
    bool rollback_guard_enabled = true;
    std::int64_t naive_timestamp_offset_ns = 0;
    std::size_t worker_threads = 4;
};

struct SubmitOverrides
{
    std::optional<int> soak_ticks;
    std::optional<std::chrono::milliseconds> tick_interval;
    std::optional<std::uint64_t> metrics_threshold;
};

struct SubmitResult
{
    enum class Kind
    {
        Accepted,
        Conflict,
        UnknownCapability,
    };

    Kind kind = Kind::Accepted;
    // Accepted: the new job's id. Conflict: the live job's id.
    std::string job_id;
};

// Listener payload: one event per transition-log row, with consistent
// snapshots of both version maps taken in the same critical section.
struct TransitionEvent
{
    std::string job_id;
    JobStatus status_after = JobStatus::Pending;
    std::string identity_hex;
    VersionMap active;
    VersionMap provisional;
};

// Read-only identity surface for the HTTP API and CLI.
struct AgentView
{
    std::string identity_hex;
    std::string prompt;
    std::string env_policy_hash_hex;
    std::string runtime_policy_hash_hex;
    std::string registry_hash_hex;
    std::string persona_hash_hex;
    std::string runtime_version;
    std::vector<std::string> names;
    std::map<std::string, std::string> active_versions;
    std::map<std::string, std::string> provisional_versions;
};

// The evolution engine: owns the agent, the job store, the audit chain
// and the execution store, and runs the eight-phase upgrade pipeline.
// One mutex serializes all state; hooks are invoked outside it.
class Engine : private ManifestGuard
{
  public:
    explicit Engine(AgentConfig const& agent_cfg, EngineConfig cfg = {}, PipelineHooks hooks = {});
    ~Engine() override;

    Engine(Engine const&) = delete;
    Engine& operator=(Engine const&) = delete;

    // Identity surface. Mutators return the new identity hash and throw
    // DuplicateCapabilityError / UnknownCapabilityError /
    // CapabilityBusyError / RekeyNotAcknowledgedError as appropriate.
    Digest identity() const;
    std::string identity_hex() const;
    Digest const& baseline_identity() const;
    AgentView agent_view() const;
    Digest install_capability(CapabilityName const& name, SemVer const& version);
    Digest remove_capability(CapabilityName const& name);
    Digest set_persona(std::string persona, bool rekey_acknowledged);
    Digest set_policy_documents(std::optional<std::string> env_doc,
                                std::optional<std::string> runtime_doc);

    // Admission. At most one live job per capability; a losing submit
    // reports Conflict with the live job's id.
    SubmitResult submit_upgrade(CapabilityName const& name, SemVer const& target,
                                SubmitOverrides const& overrides = {});

    // Drive a pending job through the pipeline on this thread. Returns the
    // terminal status. Never throws: faults terminalize the job.
    JobStatus run_job(std::string const& job_id);

    // Hand the job to the worker pool.
    void start_job(std::string const& job_id);
    bool wait_for_job(std::string const& job_id,
                      std::chrono::milliseconds timeout = std::chrono::milliseconds{60000});

    std::optional<EvolutionJob> job_snapshot(std::string const& job_id) const;
    std::vector<std::string> job_ids() const;
    std::optional<std::string> find_active_for_capability(CapabilityName const& name) const;

    // Roll back a non-terminal job. Returns the resulting status, or
    // nullopt for an unknown id; a no-op on already-terminal jobs.
    std::optional<JobStatus> abort_job(std::string const& job_id);

    // Restart semantics: roll back every in-flight job, clear leftover
    // provisional entries, append one synthetic rollback record each.
    std::size_t recover_orphans();

    // Defensive revert of a completed promote: restores the snapshotted
    // prior version and terminalizes the job rolled_back. Outside the
    // standard transition relation; not reachable from the public
    // pipeline. Returns false for unknown ids.
    bool force_rollback(std::string const& job_id, std::string const& reason);

    ExecutionStore& execution_store();
    AuditChain const& audit() const;
    WriteLog& write_log();
    void set_transition_listener(std::function<void(TransitionEvent const&)> listener);

  private:
    struct TransitionScope;

    void on_manifest_write(WriteField field) override;

    JobStatus run_job_inner(EvolutionJob& job);
    // _locked methods require mutex_ held by the caller.
    void advance_locked(EvolutionJob& job, JobStatus to, char const* transition,
                        bool audit_record);
    void log_row_locked(EvolutionJob& job);
    void enter_canary_locked(EvolutionJob& job);
    void promote(EvolutionJob& job);
    void rollback(EvolutionJob& job, std::string const& reason);
    void fail_job_locked(EvolutionJob& job, std::string const& reason, bool clear_provisional);
    CanaryMetrics default_metrics(std::int64_t window_start_ns) const;
    EvolutionJob* find_job_locked(std::string const& job_id);
    EvolutionJob const* find_job_locked(std::string const& job_id) const;
    void worker_loop();
    void ensure_workers();

    EngineConfig config_;
    PipelineHooks hooks_;

    mutable std::mutex mutex_;
    std::condition_variable job_cv_;
    AuditChain audit_;
    Agent agent_;
    Digest baseline_identity_{};
    std::vector<std::unique_ptr<EvolutionJob>> jobs_;
    std::map<std::string, std::size_t> job_index_;
    std::map<CapabilityName, std::string> active_job_by_capability_;
    std::uint64_t next_job_number_ = 1;
    std::function<void(TransitionEvent const&)> listener_;

    ExecutionStore execution_store_;
    WriteLog write_log_;

    // Worker pool (created on first start_job).
    std::mutex queue_mutex_;
    std::condition_variable queue_cv_;
    std::deque<std::string> queue_;
    std::vector<std::thread> workers_;
    bool stopping_ = false;
};

} // namespace icand
