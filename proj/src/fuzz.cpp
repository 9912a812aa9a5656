// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/fuzz.hpp"

#include "icand/engine.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <sstream>
#include <stdexcept>

namespace icand::fuzz
{

namespace
{

constexpr std::array<char const*, 6> kNamePool = {"grasp", "place", "pour",
                                                  "scan",  "wipe",  "lift"};

struct TickPlan
{
    std::uint64_t traffic = 0;
    std::uint64_t violations = 0;
};

struct JobPlan
{
    int target_name = 0;
    bool bump_minor = false;
    bool validator_pass = true;
    bool shadow_pass = true;
    std::uint64_t threshold = 0;
    bool fault = false;
    int fault_tick = 1;
    bool hook_fault = false;
    std::vector<TickPlan> ticks;
};

struct SeedPlan
{
    std::vector<std::string> names;
    std::vector<JobPlan> jobs;
};

// Every random decision for one seed, drawn up front so execution order
// cannot perturb the stream.
SeedPlan make_plan(std::uint64_t seed, int soak_ticks)
{
    soak_ticks = std::max(1, soak_ticks);
    std::mt19937_64 rng(seed);
    SeedPlan plan;

    std::size_t name_count = 1 + rng() % 3;
    std::array<bool, kNamePool.size()> taken{};
    while (plan.names.size() < name_count)
    {
        std::size_t pick = rng() % kNamePool.size();
        if (!taken[pick])
        {
            taken[pick] = true;
            plan.names.emplace_back(kNamePool[pick]);
        }
    }

    std::size_t job_count = 1 + rng() % 2;
    for (std::size_t j = 0; j < job_count; ++j)
    {
        JobPlan job;
        job.target_name = static_cast<int>(rng() % plan.names.size());
        job.bump_minor = rng() % 4 == 0;
        job.validator_pass = rng() % 8 != 0;
        job.shadow_pass = rng() % 8 != 0;
        job.threshold = rng() % 2;
        job.fault = rng() % 100 < 25;
        job.fault_tick = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(soak_ticks));
        job.hook_fault = job.fault && rng() % 5 == 0;
        for (int t = 0; t < soak_ticks; ++t)
        {
            TickPlan tick;
            tick.violations = rng() % 4 == 0 ? rng() % 3 : 0;
            tick.traffic = tick.violations + rng() % 3;
            job.ticks.push_back(tick);
        }
        plan.jobs.push_back(std::move(job));
    }
    return plan;
}

std::string render_version_map(VersionMap const& map)
{
    std::string out = "[";
    bool first = true;
    for (auto const& [name, version] : map)
    {
        if (!first)
            out.push_back(',');
        out += name.str() + "=" + version.str();
        first = false;
    }
    out.push_back(']');
    return out;
}

struct SeedOutcome
{
    std::vector<TransitionEvent> events;
    std::vector<EvolutionJob> jobs;
    std::string baseline_hex;
    std::string trace;
    std::vector<std::string> invariant_failures;
    bool reached_canary = false;
};

SeedOutcome run_seed(std::uint64_t seed, IdentityMode mode, int soak_ticks)
{
    soak_ticks = std::max(1, soak_ticks);
    SeedPlan plan = make_plan(seed, soak_ticks);

    AgentConfig agent_cfg;
    agent_cfg.prompt = "You are a careful workshop robot.";
    agent_cfg.env_policy_doc = "env: none\n";
    agent_cfg.runtime_policy_doc = "policy: none\n";
    agent_cfg.identity_includes_versions = identity_includes_versions(mode);
    for (auto const& name : plan.names)
        agent_cfg.capabilities.emplace(name, SemVer{1, 0, 0});

    EngineConfig engine_cfg;
    engine_cfg.default_soak_ticks = soak_ticks;
    engine_cfg.default_tick_interval = std::chrono::milliseconds{0};
    engine_cfg.worker_threads = 0; // jobs run synchronously on this thread

    // State the hooks consult for the job currently executing.
    struct Current
    {
        JobPlan const* job = nullptr;
        int tick = 0;
    };
    auto current = std::make_shared<Current>();

    PipelineHooks hooks;
    hooks.validator = [current](CapabilityName const&, SemVer const&) {
        return current->job->validator_pass;
    };
    hooks.shadow_replay = [current](CapabilityName const&, SemVer const&) {
        return current->job->shadow_pass;
    };
    hooks.metrics_provider = [current](std::int64_t window_start) {
        auto const& job = *current->job;
        int tick = ++current->tick;
        if (job.fault && tick == job.fault_tick)
            throw std::runtime_error("injected metrics fault at tick " + std::to_string(tick));
        auto const& t = job.ticks[static_cast<std::size_t>(tick - 1)];
        return CanaryMetrics{window_start, t.traffic, t.violations, 0};
    };
    hooks.on_rollback = [current](CapabilityName const&, std::string const&) {
        if (current->job != nullptr && current->job->hook_fault)
            throw std::runtime_error("rollback notification endpoint unreachable");
    };

    Engine engine(agent_cfg, engine_cfg, std::move(hooks));

    SeedOutcome outcome;
    outcome.baseline_hex = to_hex(engine.baseline_identity());
    engine.set_transition_listener(
        [&outcome](TransitionEvent const& ev) { outcome.events.push_back(ev); });

    std::ostringstream trace;
    trace << "seed " << seed << " mode " << to_string(mode) << " soak " << soak_ticks << "\n";
    trace << "names:";
    for (auto const& name : plan.names)
        trace << ' ' << name;
    trace << "\n";

    for (auto const& job_plan : plan.jobs)
    {
        current->job = &job_plan;
        current->tick = 0;

        CapabilityName target(plan.names[static_cast<std::size_t>(job_plan.target_name)]);
        auto active = engine.agent_view().active_versions.at(target.str());
        auto base = SemVer::parse(active).value();
        SemVer next = job_plan.bump_minor ? base.next_minor() : base.next_patch();

        SubmitOverrides overrides;
        overrides.metrics_threshold = job_plan.threshold;
        auto submitted = engine.submit_upgrade(target, next, overrides);
        trace << "submit " << target.str() << ' ' << next.str() << " -> "
              << (submitted.kind == SubmitResult::Kind::Accepted ? submitted.job_id : "conflict")
              << "\n";
        if (submitted.kind != SubmitResult::Kind::Accepted)
            continue;

        auto status = engine.run_job(submitted.job_id);
        auto job = engine.job_snapshot(submitted.job_id).value();
        outcome.jobs.push_back(job);
        trace << "job " << submitted.job_id << " end " << to_string(status) << " reason '"
              << job.failure_reason.value_or("") << "'\n";
    }
    current->job = nullptr;

    for (auto const& ev : outcome.events)
    {
        trace << "  " << ev.job_id << ' ' << to_string(ev.status_after) << " id="
              << ev.identity_hex.substr(0, 8) << " V=" << render_version_map(ev.active)
              << " Vp=" << render_version_map(ev.provisional) << "\n";
        if (ev.status_after == JobStatus::CanaryRunning)
            outcome.reached_canary = true;
    }
    outcome.trace = trace.str();

    // Invariants over the observed transitions.
    auto fail = [&outcome, seed](std::string const& what) {
        outcome.invariant_failures.push_back("seed " + std::to_string(seed) + ": " + what);
    };

    std::map<std::string, JobStatus> last_status;
    VersionMap const* prev_active = nullptr;
    for (auto const& ev : outcome.events)
    {
        if (ev.identity_hex != outcome.baseline_hex)
        {
            fail("identity_constant: " + ev.identity_hex.substr(0, 8) + " at " +
                 std::string(to_string(ev.status_after)) + " vs baseline " +
                 outcome.baseline_hex.substr(0, 8));
        }

        auto last = last_status.find(ev.job_id);
        if (last == last_status.end())
        {
            if (ev.status_after != JobStatus::Pending)
                fail("legal_transitions: job born in " +
                     std::string(to_string(ev.status_after)));
        }
        else if (!legal_transition(last->second, ev.status_after))
        {
            fail("legal_transitions: " + std::string(to_string(last->second)) + "->" +
                 std::string(to_string(ev.status_after)));
        }
        last_status[ev.job_id] = ev.status_after;

        if (prev_active != nullptr && *prev_active != ev.active &&
            ev.status_after != JobStatus::Promoted)
        {
            fail("active_version_writes: active map changed entering " +
                 std::string(to_string(ev.status_after)));
        }
        prev_active = &ev.active;

        bool in_window = ev.status_after == JobStatus::CanaryRunning ||
                         ev.status_after == JobStatus::CanaryPromoted;
        if (in_window != !ev.provisional.empty())
        {
            fail("provisional_lifecycle: Vp " + render_version_map(ev.provisional) + " at " +
                 std::string(to_string(ev.status_after)));
        }
    }
    for (auto const& job : outcome.jobs)
    {
        if (!is_terminal(job.status))
            fail("job " + job.id + " left non-terminal");
    }
    return outcome;
}

// The coverage a report must reach before the fuzzer considers a run
// meaningful: the full status space plus every failure branch.
constexpr std::array<char const*, 6> kRequiredBranches = {
    "promote",        "validator_reject",     "shadow_reject",
    "fault_rollback", "threshold_rollback",   "rollback_hook_fault"};

std::string classify_branch(EvolutionJob const& job)
{
    switch (job.status)
    {
    case JobStatus::Promoted:
        return "promote";
    case JobStatus::Rejected:
        return job.failure_reason.value_or("") == "validator rejected target"
                   ? "validator_reject"
                   : "shadow_reject";
    case JobStatus::RolledBack:
    {
        auto reason = job.failure_reason.value_or("");
        if (reason.rfind("canary metrics above threshold", 0) == 0)
            return "threshold_rollback";
        return "fault_rollback";
    }
    case JobStatus::Failed:
        return "rollback_hook_fault";
    default:
        return "incomplete";
    }
}

} // namespace

bool FuzzReport::all_statuses_covered() const
{
    for (int i = 0; i < kJobStatusCount; ++i)
    {
        auto it = status_coverage.find(std::string(to_string(static_cast<JobStatus>(i))));
        if (it == status_coverage.end() || it->second == 0)
            return false;
    }
    return true;
}

bool FuzzReport::all_branches_covered() const
{
    for (auto const* branch : kRequiredBranches)
    {
        auto it = branch_coverage.find(branch);
        if (it == branch_coverage.end() || it->second == 0)
            return false;
    }
    return true;
}

FuzzReport run_fuzz(FuzzConfig const& cfg)
{
    FuzzReport report;
    constexpr std::size_t kMaxDetails = 5;
    for (std::uint64_t seed = cfg.first_seed; seed < cfg.first_seed + cfg.seed_count; ++seed)
    {
        auto outcome = run_seed(seed, cfg.mode, cfg.soak_ticks);
        ++report.seeds_run;
        if (outcome.reached_canary)
            ++report.seeds_reaching_canary;
        if (!outcome.invariant_failures.empty())
        {
            ++report.violating_seeds;
            for (auto const& detail : outcome.invariant_failures)
            {
                if (report.violation_details.size() < kMaxDetails)
                    report.violation_details.push_back(detail);
            }
        }
        for (auto const& ev : outcome.events)
            ++report.status_coverage[std::string(to_string(ev.status_after))];
        for (auto const& job : outcome.jobs)
            ++report.branch_coverage[classify_branch(job)];
    }
    return report;
}

std::string fuzz_trace(std::uint64_t seed, IdentityMode mode, int soak_ticks)
{
    return run_seed(seed, mode, soak_ticks).trace;
}

} // namespace icand::fuzz
