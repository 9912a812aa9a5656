// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/engine.hpp"

#include "icand/errors.hpp"

#include <chrono>

namespace icand
{

namespace
{
std::uint64_t mono_ns()
{
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now().time_since_epoch())
            .count());
}

std::int64_t utc_ns()
{
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

struct ScopeState
{
    Engine const* owner = nullptr;
    char const* label = nullptr;
};

thread_local ScopeState t_transition_scope;
} // namespace

// Marks this thread as executing the named pipeline transition, so the
// manifest guard can attribute and refuse identity-field writes made from
// hooks. Scopes nest; the previous scope is restored on exit.
struct Engine::TransitionScope
{
    TransitionScope(Engine const& engine, char const* label) : prev_(t_transition_scope)
    {
        t_transition_scope = ScopeState{&engine, label};
    }

    ~TransitionScope()
    {
        t_transition_scope = prev_;
    }

    TransitionScope(TransitionScope const&) = delete;
    TransitionScope& operator=(TransitionScope const&) = delete;

  private:
    ScopeState prev_;
};

Engine::Engine(AgentConfig const& agent_cfg, EngineConfig cfg, PipelineHooks hooks)
    : config_(cfg), hooks_(std::move(hooks)), agent_(agent_cfg, &audit_)
{
    baseline_identity_ = agent_.identity();
    agent_.set_guard(this);
}

Engine::~Engine()
{
    {
        // The teardown rollbacks below must not notify observers: the
        // listener's captures may already be gone by the time the engine
        // is destroyed.
        std::lock_guard<std::mutex> lock(mutex_);
        listener_ = nullptr;
    }
    {
        std::lock_guard<std::mutex> qlock(queue_mutex_);
        stopping_ = true;
    }
    queue_cv_.notify_all();
    for (auto const& id : job_ids())
    {
        abort_job(id);
    }
    for (auto& w : workers_)
    {
        if (w.joinable())
            w.join();
    }
}

void Engine::on_manifest_write(WriteField field)
{
    auto const& scope = t_transition_scope;
    if (scope.owner == this && scope.label != nullptr)
    {
        write_log_.record(scope.label, field);
        throw FrozenManifestError(std::string("manifest field ") + std::string(to_string(field)) +
                                  " is frozen during pipeline transition " + scope.label);
    }
}

Digest Engine::identity() const
{
    std::lock_guard<std::mutex> lock(mutex_);
    return agent_.identity();
}

std::string Engine::identity_hex() const
{
    return to_hex(identity());
}

Digest const& Engine::baseline_identity() const
{
    return baseline_identity_;
}

AgentView Engine::agent_view() const
{
    std::lock_guard<std::mutex> lock(mutex_);
    AgentView v;
    v.identity_hex = agent_.identity_hex();
    auto const& m = agent_.manifest();
    v.prompt = m.prompt;
    v.env_policy_hash_hex = to_hex(m.env_policy_hash);
    v.runtime_policy_hash_hex = to_hex(m.runtime_policy_hash);
    v.registry_hash_hex = to_hex(m.registry_hash);
    v.persona_hash_hex = to_hex(m.persona_hash);
    v.runtime_version = m.runtime_version;
    for (auto const& name : agent_.names())
        v.names.push_back(name.str());
    for (auto const& [name, version] : agent_.active_versions())
        v.active_versions.emplace(name.str(), version.str());
    for (auto const& [name, version] : agent_.provisional_versions())
        v.provisional_versions.emplace(name.str(), version.str());
    return v;
}

Digest Engine::install_capability(CapabilityName const& name, SemVer const& version)
{
    std::lock_guard<std::mutex> lock(mutex_);
    return agent_.register_capability(name, version);
}

Digest Engine::remove_capability(CapabilityName const& name)
{
    std::lock_guard<std::mutex> lock(mutex_);
    auto live = active_job_by_capability_.find(name);
    if (live != active_job_by_capability_.end())
    {
        throw CapabilityBusyError("capability " + name.str() + " has live job " + live->second);
    }
    return agent_.deregister_capability(name);
}

Digest Engine::set_persona(std::string persona, bool rekey_acknowledged)
{
    std::lock_guard<std::mutex> lock(mutex_);
    return agent_.set_persona(std::move(persona), rekey_acknowledged);
}

Digest Engine::set_policy_documents(std::optional<std::string> env_doc,
                                    std::optional<std::string> runtime_doc)
{
    std::lock_guard<std::mutex> lock(mutex_);
    return agent_.set_policy_documents(std::move(env_doc), std::move(runtime_doc));
}

SubmitResult Engine::submit_upgrade(CapabilityName const& name, SemVer const& target,
                                    SubmitOverrides const& overrides)
{
    std::lock_guard<std::mutex> lock(mutex_);
    if (!agent_.names().contains(name))
    {
        return SubmitResult{SubmitResult::Kind::UnknownCapability, ""};
    }
    auto live = active_job_by_capability_.find(name);
    if (live != active_job_by_capability_.end())
    {
        return SubmitResult{SubmitResult::Kind::Conflict, live->second};
    }

    auto job = std::make_unique<EvolutionJob>("job-" + std::to_string(next_job_number_++), name,
                                              target, agent_.active_versions().at(name));
    job->soak_ticks = overrides.soak_ticks.value_or(config_.default_soak_ticks);
    job->tick_interval = overrides.tick_interval.value_or(config_.default_tick_interval);
    job->metrics_threshold =
        overrides.metrics_threshold.value_or(config_.default_metrics_threshold);

    EvolutionJob& ref = *job;
    job_index_[ref.id] = jobs_.size();
    jobs_.push_back(std::move(job));
    active_job_by_capability_[name] = ref.id;
    log_row_locked(ref); // initial pending row
    return SubmitResult{SubmitResult::Kind::Accepted, ref.id};
}

JobStatus Engine::run_job(std::string const& job_id)
{
    EvolutionJob* job = nullptr;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        job = find_job_locked(job_id);
        if (job == nullptr)
            throw UnknownCapabilityError("unknown job id: " + job_id);
        if (job->status != JobStatus::Pending)
            return job->status;
    }

    try
    {
        return run_job_inner(*job);
    }
    catch (std::exception const& e)
    {
        // Scheduler boundary: the fault was re-signaled after closure ran
        // (or was skipped with the guard off). Anything still live here is
        // terminalized failed; with the guard off that leaves the
        // provisional entry behind, which is the point of the control.
        std::lock_guard<std::mutex> lock(mutex_);
        if (!is_terminal(job->status))
        {
            fail_job_locked(*job, e.what(), /*clear_provisional=*/false);
        }
        return job->status;
    }
}

JobStatus Engine::run_job_inner(EvolutionJob& job)
{
    try
    {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            if (job.status != JobStatus::Pending)
                return job.status;
            TransitionScope scope(*this, "pending->validating");
            advance_locked(job, JobStatus::Validating, "pending->validating", false);
        }

        bool validator_ok = true;
        {
            TransitionScope scope(*this, "validating->shadow_running");
            if (hooks_.validator)
                validator_ok = hooks_.validator(job.capability, job.target_version);
            std::lock_guard<std::mutex> lock(mutex_);
            if (is_terminal(job.status))
                return job.status;
            if (!validator_ok)
            {
                TransitionScope reject_scope(*this, "validating->rejected");
                advance_locked(job, JobStatus::Rejected, "validating->rejected", false);
                job.failure_reason = "validator rejected target";
                return job.status;
            }
            advance_locked(job, JobStatus::ShadowRunning, "validating->shadow_running", false);
        }

        bool shadow_ok = true;
        {
            TransitionScope scope(*this, "shadow_running->shadow_passed");
            if (hooks_.shadow_replay)
                shadow_ok = hooks_.shadow_replay(job.capability, job.target_version);
            std::lock_guard<std::mutex> lock(mutex_);
            if (is_terminal(job.status))
                return job.status;
            if (!shadow_ok)
            {
                TransitionScope reject_scope(*this, "shadow_running->rejected");
                advance_locked(job, JobStatus::Rejected, "shadow_running->rejected", false);
                job.failure_reason = "shadow replay diverged";
                return job.status;
            }
            advance_locked(job, JobStatus::ShadowPassed, "shadow_running->shadow_passed", true);
        }

        {
            std::lock_guard<std::mutex> lock(mutex_);
            if (is_terminal(job.status))
                return job.status;
            TransitionScope scope(*this, "shadow_passed->canary_running");
            enter_canary_locked(job);
        }

        // Soak loop: one metrics evaluation per tick. The canary window
        // closes by promote-ready on the final tick, rollback-now on a
        // threshold breach, or a provider fault.
        bool promote_ready = false;
        for (int tick = 1; tick <= job.soak_ticks && !promote_ready; ++tick)
        {
            if (job.tick_interval.count() > 0)
                std::this_thread::sleep_for(job.tick_interval);
            {
                std::lock_guard<std::mutex> lock(mutex_);
                if (is_terminal(job.status))
                    return job.status; // an abort won the window
            }

            TransitionScope scope(*this, "canary_running->canary_promoted");
            CanaryMetrics m = hooks_.metrics_provider
                                  ? hooks_.metrics_provider(job.window_start_ns)
                                  : default_metrics(job.window_start_ns);
            switch (evaluate_tick(m, job.metrics_threshold, tick == job.soak_ticks))
            {
            case TickDecision::RollbackNow:
                rollback(job, "canary metrics above threshold: " +
                                  std::to_string(m.violation_count) + " violation(s)");
                return job.status;
            case TickDecision::PromoteReady:
                promote_ready = true;
                break;
            case TickDecision::Continue:
                break;
            }
        }

        {
            std::lock_guard<std::mutex> lock(mutex_);
            if (is_terminal(job.status))
                return job.status;
            TransitionScope scope(*this, "canary_running->canary_promoted");
            advance_locked(job, JobStatus::CanaryPromoted, "canary_running->canary_promoted",
                           true);
        }

        {
            TransitionScope scope(*this, "canary_promoted->promoted");
            if (hooks_.on_promote)
                hooks_.on_promote(job.capability, job.target_version);
            promote(job);
        }
        return job.status;
    }
    catch (InvariantFaultError const& e)
    {
        // Internal invariant breach: abort to failed, own provisional
        // entry cleared, then re-signal.
        {
            std::lock_guard<std::mutex> lock(mutex_);
            if (!is_terminal(job.status))
                fail_job_locked(job, e.what(), /*clear_provisional=*/true);
        }
        throw;
    }
    catch (std::exception const& e)
    {
        // Fault closure: roll back (guard permitting), then re-signal the
        // original fault to the scheduler boundary.
        if (config_.rollback_guard_enabled)
        {
            rollback(job, std::string("fault: ") + e.what());
        }
        throw;
    }
}

void Engine::advance_locked(EvolutionJob& job, JobStatus to, char const* transition,
                            bool audit_record)
{
    if (!legal_transition(job.status, to))
    {
        throw InvariantFaultError(std::string("illegal transition ") +
                                  std::string(to_string(job.status)) + "->" +
                                  std::string(to_string(to)));
    }
    auto from = job.status;
    job.status = to;
    write_log_.record(transition, WriteField::JobMetadata);
    if (audit_record)
    {
        audit_.append(AuditKind::Transition,
                      std::string(to_string(from)) + "->" + std::string(to_string(to)),
                      agent_.identity());
        write_log_.record(transition, WriteField::AuditLog);
    }
    log_row_locked(job);
    if (is_terminal(to))
    {
        auto live = active_job_by_capability_.find(job.capability);
        if (live != active_job_by_capability_.end() && live->second == job.id)
            active_job_by_capability_.erase(live);
        job_cv_.notify_all();
    }
}

void Engine::log_row_locked(EvolutionJob& job)
{
    TransitionLogRow row;
    row.status_after = job.status;
    row.identity_hex = agent_.identity_hex();
    row.timestamp_ns = mono_ns();
    job.transition_log.push_back(row);
    if (listener_)
    {
        TransitionEvent ev;
        ev.job_id = job.id;
        ev.status_after = job.status;
        ev.identity_hex = row.identity_hex;
        ev.active = agent_.active_versions();
        ev.provisional = agent_.provisional_versions();
        listener_(ev);
    }
}

void Engine::enter_canary_locked(EvolutionJob& job)
{
    if (job.status != JobStatus::ShadowPassed)
    {
        throw InvariantFaultError("canary entry from " + std::string(to_string(job.status)));
    }
    if (agent_.provisional_versions().contains(job.capability))
    {
        throw InvariantFaultError("provisional version already set for " + job.capability.str());
    }
    job.window_start_ns = utc_ns();
    write_log_.record("shadow_passed->canary_running", WriteField::ProvisionalVersions);
    agent_.set_provisional(job.capability, job.target_version);
    advance_locked(job, JobStatus::CanaryRunning, "shadow_passed->canary_running", true);
}

void Engine::promote(EvolutionJob& job)
{
    std::lock_guard<std::mutex> lock(mutex_);
    // A rollback past its cleanup phase owns the job; its closure will
    // terminalize it.
    if (is_terminal(job.status) || job.rollback_in_flight)
        return;
    if (!agent_.provisional_versions().contains(job.capability))
    {
        throw InvariantFaultError("promote without provisional version for " +
                                  job.capability.str());
    }
    // The flip and the status change share this critical section, so no
    // reader can observe the new active version with a live canary.
    write_log_.record("canary_promoted->promoted", WriteField::ActiveVersions);
    agent_.set_active(job.capability, job.target_version);
    write_log_.record("canary_promoted->promoted", WriteField::ProvisionalVersions);
    agent_.clear_provisional(job.capability);
    advance_locked(job, JobStatus::Promoted, "canary_promoted->promoted", true);
}

void Engine::rollback(EvolutionJob& job, std::string const& reason)
{
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (is_terminal(job.status) || job.rollback_in_flight)
            return;
        job.rollback_in_flight = true;
        // Provisional cleanup happens first and under the lock: the
        // closure itself has no step that can fail.
        write_log_.record("*->rolled_back", WriteField::ProvisionalVersions);
        agent_.clear_provisional(job.capability);
    }

    bool hook_ok = true;
    std::string hook_error;
    if (hooks_.on_rollback)
    {
        TransitionScope scope(*this, "*->rolled_back");
        try
        {
            hooks_.on_rollback(job.capability, reason);
        }
        catch (std::exception const& e)
        {
            hook_ok = false;
            hook_error = e.what();
        }
    }

    std::lock_guard<std::mutex> lock(mutex_);
    job.rollback_in_flight = false;
    if (is_terminal(job.status))
        return;
    if (hook_ok)
    {
        advance_locked(job, JobStatus::RolledBack, "*->rolled_back", true);
        audit_.append(AuditKind::RollbackReason, reason, agent_.identity());
        job.failure_reason = reason;
    }
    else
    {
        // The rollback notification hook is the one closure step outside
        // our control; its fault lands the job in failed with state
        // already clean.
        fail_job_locked(job, "rollback hook fault: " + hook_error, false);
    }
}

void Engine::fail_job_locked(EvolutionJob& job, std::string const& reason, bool clear_provisional)
{
    if (is_terminal(job.status))
        return;
    if (clear_provisional)
    {
        write_log_.record("*->failed", WriteField::ProvisionalVersions);
        agent_.clear_provisional(job.capability);
    }
    advance_locked(job, JobStatus::Failed, "*->failed", true);
    job.failure_reason = reason;
}

CanaryMetrics Engine::default_metrics(std::int64_t window_start_ns) const
{
    return collect_metrics(execution_store_, window_start_ns, config_.naive_timestamp_offset_ns);
}

std::optional<JobStatus> Engine::abort_job(std::string const& job_id)
{
    EvolutionJob* job = nullptr;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        job = find_job_locked(job_id);
        if (job == nullptr)
            return std::nullopt;
        if (is_terminal(job->status))
            return job->status;
    }
    rollback(*job, "aborted by operator");
    std::lock_guard<std::mutex> lock(mutex_);
    return job->status;
}

std::size_t Engine::recover_orphans()
{
    std::lock_guard<std::mutex> lock(mutex_);
    std::size_t recovered = 0;
    for (auto const& job : jobs_)
    {
        if (is_terminal(job->status))
            continue;
        write_log_.record("*->rolled_back", WriteField::ProvisionalVersions);
        agent_.clear_provisional(job->capability);
        advance_locked(*job, JobStatus::RolledBack, "*->rolled_back", true);
        job->failure_reason = "restart recovery";
        audit_.append(AuditKind::SyntheticRestartRollback,
                      "restart: job " + job->id + " rolled back", agent_.identity());
        ++recovered;
    }
    return recovered;
}

bool Engine::force_rollback(std::string const& job_id, std::string const& reason)
{
    EvolutionJob* job = nullptr;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        job = find_job_locked(job_id);
        if (job == nullptr)
            return false;
        if (job->status == JobStatus::Promoted)
        {
            // Defensive revert of a completed promote. Not part of the
            // standard relation; restores the pre-job active version.
            write_log_.record("*->rolled_back", WriteField::ActiveVersions);
            agent_.set_active(job->capability, job->prior_version);
            write_log_.record("*->rolled_back", WriteField::ProvisionalVersions);
            agent_.clear_provisional(job->capability);
            job->status = JobStatus::RolledBack;
            write_log_.record("*->rolled_back", WriteField::JobMetadata);
            audit_.append(AuditKind::Transition, "promoted->rolled_back", agent_.identity());
            write_log_.record("*->rolled_back", WriteField::AuditLog);
            audit_.append(AuditKind::RollbackReason, reason, agent_.identity());
            log_row_locked(*job);
            job->failure_reason = reason;
            job_cv_.notify_all();
            return true;
        }
        if (is_terminal(job->status))
            return false;
    }
    rollback(*job, reason);
    return true;
}

std::optional<EvolutionJob> Engine::job_snapshot(std::string const& job_id) const
{
    std::lock_guard<std::mutex> lock(mutex_);
    auto const* job = find_job_locked(job_id);
    if (job == nullptr)
        return std::nullopt;
    return *job;
}

std::vector<std::string> Engine::job_ids() const
{
    std::lock_guard<std::mutex> lock(mutex_);
    std::vector<std::string> out;
    out.reserve(jobs_.size());
    for (auto const& job : jobs_)
        out.push_back(job->id);
    return out;
}

std::optional<std::string> Engine::find_active_for_capability(CapabilityName const& name) const
{
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = active_job_by_capability_.find(name);
    if (it == active_job_by_capability_.end())
        return std::nullopt;
    return it->second;
}

void Engine::start_job(std::string const& job_id)
{
    ensure_workers();
    {
        std::lock_guard<std::mutex> qlock(queue_mutex_);
        if (stopping_)
            return;
        queue_.push_back(job_id);
    }
    queue_cv_.notify_one();
}

bool Engine::wait_for_job(std::string const& job_id, std::chrono::milliseconds timeout)
{
    std::unique_lock<std::mutex> lock(mutex_);
    return job_cv_.wait_for(lock, timeout, [&] {
        auto const* job = find_job_locked(job_id);
        return job != nullptr && is_terminal(job->status);
    });
}

ExecutionStore& Engine::execution_store()
{
    return execution_store_;
}

AuditChain const& Engine::audit() const
{
    return audit_;
}

WriteLog& Engine::write_log()
{
    return write_log_;
}

void Engine::set_transition_listener(std::function<void(TransitionEvent const&)> listener)
{
    std::lock_guard<std::mutex> lock(mutex_);
    listener_ = std::move(listener);
}

EvolutionJob* Engine::find_job_locked(std::string const& job_id)
{
    auto it = job_index_.find(job_id);
    return it == job_index_.end() ? nullptr : jobs_[it->second].get();
}

EvolutionJob const* Engine::find_job_locked(std::string const& job_id) const
{
    auto it = job_index_.find(job_id);
    return it == job_index_.end() ? nullptr : jobs_[it->second].get();
}

void Engine::ensure_workers()
{
    std::lock_guard<std::mutex> qlock(queue_mutex_);
    if (!workers_.empty() || stopping_ || config_.worker_threads == 0)
        return;
    workers_.reserve(config_.worker_threads);
    for (std::size_t i = 0; i < config_.worker_threads; ++i)
    {
        workers_.emplace_back([this] { worker_loop(); });
    }
}

void Engine::worker_loop()
{
    for (;;)
    {
        std::string job_id;
        {
            std::unique_lock<std::mutex> qlock(queue_mutex_);
            queue_cv_.wait(qlock, [&] { return stopping_ || !queue_.empty(); });
            if (queue_.empty())
                return; // stopping
            job_id = std::move(queue_.front());
            queue_.pop_front();
        }
        run_job(job_id); // never throws
    }
}

} // namespace icand
