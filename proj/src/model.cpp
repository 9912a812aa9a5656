// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/model.hpp"

#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace icand::model
{

namespace
{

std::string render_indices(std::vector<int> const& xs)
{
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        if (i > 0)
            out.push_back(',');
        if (xs[i] < 0)
            out.push_back('-');
        else
            out += std::to_string(xs[i]);
    }
    out.push_back(']');
    return out;
}

// What the identity hash would cover. The shipped construction hashes the
// manifest only; the version-coupled variant folds both maps in.
std::string identity_projection(ModelState const& s, IdentityMode mode)
{
    std::string out = "tag:" + std::to_string(s.manifest_tag);
    if (identity_includes_versions(mode))
    {
        out += " V:" + render_indices(s.active) + " Vp:" + render_indices(s.provisional);
    }
    return out;
}

struct Edge
{
    std::string label;
    ModelState to;
};

std::vector<Edge> successors(ModelState const& s, ModelConfig const& cfg)
{
    std::vector<Edge> out;
    auto push = [&](std::string label, ModelState next, JobStatus status) {
        next.status = status;
        out.push_back(Edge{std::move(label), std::move(next)});
    };

    switch (s.status)
    {
    case JobStatus::Pending:
        push("pending->validating", s, JobStatus::Validating);
        break;
    case JobStatus::Validating:
        push("validating->shadow_running", s, JobStatus::ShadowRunning);
        push("validating->rejected", s, JobStatus::Rejected);
        break;
    case JobStatus::ShadowRunning:
        push("shadow_running->shadow_passed", s, JobStatus::ShadowPassed);
        push("shadow_running->rejected", s, JobStatus::Rejected);
        break;
    case JobStatus::ShadowPassed:
        // The upgrade target is chosen here: any name, any version other
        // than its active one.
        for (int name = 0; name < cfg.name_count; ++name)
        {
            for (int version = 0; version < cfg.version_count; ++version)
            {
                if (version == s.active[static_cast<std::size_t>(name)])
                    continue;
                ModelState next = s;
                next.provisional[static_cast<std::size_t>(name)] = version;
                push("shadow_passed->canary_running[n" + std::to_string(name) + "@v" +
                         std::to_string(version) + "]",
                     next, JobStatus::CanaryRunning);
            }
        }
        break;
    case JobStatus::CanaryRunning:
    {
        push("canary_running->canary_promoted", s, JobStatus::CanaryPromoted);
        ModelState rolled = s;
        rolled.provisional.assign(rolled.provisional.size(), -1);
        push("canary_running->rolled_back", rolled, JobStatus::RolledBack);
        break;
    }
    case JobStatus::CanaryPromoted:
    {
        ModelState promoted = s;
        for (std::size_t i = 0; i < promoted.provisional.size(); ++i)
        {
            if (promoted.provisional[i] >= 0)
            {
                promoted.active[i] = promoted.provisional[i];
                promoted.provisional[i] = -1;
            }
        }
        push("canary_promoted->promoted", promoted, JobStatus::Promoted);
        ModelState rolled = s;
        rolled.provisional.assign(rolled.provisional.size(), -1);
        push("canary_promoted->rolled_back", rolled, JobStatus::RolledBack);
        break;
    }
    default:
        break; // terminal states absorb
    }
    return out;
}

bool provisional_empty(ModelState const& s)
{
    for (int v : s.provisional)
    {
        if (v >= 0)
            return false;
    }
    return true;
}

} // namespace

std::string ModelState::key() const
{
    std::ostringstream out;
    out << static_cast<int>(status) << '|';
    for (int v : active)
        out << v << ',';
    out << '|';
    for (int v : provisional)
        out << v << ',';
    out << '|' << manifest_tag;
    return out.str();
}

std::string ModelState::pretty() const
{
    std::string out(to_string(status));
    out += " V=" + render_indices(active) + " Vp=" + render_indices(provisional) +
           " tag=" + std::to_string(manifest_tag);
    return out;
}

InvariantReport enumerate_reachable(ModelConfig const& cfg)
{
    if (cfg.name_count < 1)
        throw std::invalid_argument("model needs at least one capability name");
    if (cfg.version_count < 2)
        throw std::invalid_argument("model needs at least two versions per name");

    InvariantReport report;

    ModelState initial;
    initial.active.assign(static_cast<std::size_t>(cfg.name_count), 0);
    initial.provisional.assign(static_cast<std::size_t>(cfg.name_count), -1);

    std::string const initial_projection = identity_projection(initial, cfg.mode);

    struct Visit
    {
        ModelState state;
        int depth = 0;
        // Index of the predecessor in the visit order, -1 for the root.
        int parent = -1;
        std::string edge_label;
    };

    std::vector<Visit> visits;
    std::map<std::string, std::size_t> seen;
    std::deque<std::size_t> frontier;

    auto trace_to = [&](std::size_t index) {
        std::vector<std::string> lines;
        std::vector<std::size_t> path;
        for (int at = static_cast<int>(index); at >= 0; at = visits[static_cast<std::size_t>(at)].parent)
            path.push_back(static_cast<std::size_t>(at));
        for (auto it = path.rbegin(); it != path.rend(); ++it)
        {
            auto const& v = visits[*it];
            if (v.parent < 0)
                lines.push_back("initial: " + v.state.pretty());
            else
                lines.push_back("-[" + v.edge_label + "]-> " + v.state.pretty());
        }
        return lines;
    };

    std::size_t constexpr kMaxViolationTraces = 8;
    auto violate = [&](std::string invariant, std::size_t at_index, std::string detail) {
        Violation v;
        v.invariant = std::move(invariant);
        if (report.violations.size() < kMaxViolationTraces)
        {
            v.trace = trace_to(at_index);
            v.trace.push_back("violation: " + std::move(detail));
        }
        report.violations.push_back(std::move(v));
    };

    auto check_state = [&](std::size_t index) {
        auto const& s = visits[index].state;
        bool in_window =
            s.status == JobStatus::CanaryRunning || s.status == JobStatus::CanaryPromoted;
        if (in_window == provisional_empty(s))
        {
            violate("provisional_lifecycle", index,
                    "provisional map " + std::string(in_window ? "empty" : "non-empty") + " in " +
                        std::string(to_string(s.status)));
        }
        auto projection = identity_projection(s, cfg.mode);
        if (projection != initial_projection)
        {
            violate("identity_constant", index,
                    "hash input drifted: {" + projection + "} vs initial {" + initial_projection +
                        "}");
        }
    };

    visits.push_back(Visit{initial, 0, -1, ""});
    seen.emplace(initial.key(), 0);
    frontier.push_back(0);
    check_state(0);

    while (!frontier.empty())
    {
        std::size_t index = frontier.front();
        frontier.pop_front();
        // Copy: successors() growth can reallocate visits.
        ModelState const from = visits[index].state;
        int const from_depth = visits[index].depth;

        for (auto& edge : successors(from, cfg))
        {
            // Edge invariants first; they reference both endpoints.
            if (!legal_transition(from.status, edge.to.status))
            {
                violate("legal_transitions", index,
                        "edge " + edge.label + " leaves the transition relation");
            }
            bool is_promote_edge = edge.to.status == JobStatus::Promoted;
            for (std::size_t i = 0; i < from.active.size(); ++i)
            {
                bool changed = from.active[i] != edge.to.active[i];
                bool allowed = is_promote_edge && from.provisional[i] >= 0 &&
                               edge.to.active[i] == from.provisional[i];
                if (changed && !allowed)
                {
                    violate("active_version_writes", index,
                            "edge " + edge.label + " rewrote active[" + std::to_string(i) + "]");
                }
            }

            auto key = edge.to.key();
            auto found = seen.find(key);
            if (found != seen.end())
                continue;
            std::size_t new_index = visits.size();
            seen.emplace(std::move(key), new_index);
            visits.push_back(Visit{std::move(edge.to), from_depth + 1, static_cast<int>(index),
                                   std::move(edge.label)});
            frontier.push_back(new_index);
            if (visits[new_index].depth > report.max_depth)
                report.max_depth = visits[new_index].depth;
            check_state(new_index);
        }
    }

    report.states_explored = visits.size();
    if (cfg.collect_states)
    {
        report.states.reserve(visits.size());
        for (auto const& v : visits)
            report.states.push_back(v.state);
    }
    return report;
}

std::vector<InvariantRow> invariant_rows(InvariantReport const& report)
{
    std::vector<InvariantRow> rows;
    for (auto const* name :
         {"identity_constant", "legal_transitions", "active_version_writes",
          "provisional_lifecycle"})
    {
        InvariantRow row;
        row.invariant = name;
        row.states = report.states_explored;
        row.depth = report.max_depth;
        for (auto const& v : report.violations)
        {
            if (v.invariant == name)
                ++row.violations;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace icand::model
