// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include "icand/job.hpp"
#include "icand/mode.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace icand::model
{

// Finite abstraction of one upgrade pipeline: job status, per-name active
// version index, per-name provisional index (-1 when unset) and an opaque
// manifest tag that pipeline actions never touch. The upgrade target is
// not part of the state; canary entry branches over every (name, version)
// pair with a version different from the active one.
struct ModelState
{
    JobStatus status = JobStatus::Pending;
    std::vector<int> active;
    std::vector<int> provisional; // -1 = unset
    int manifest_tag = 0;

    bool operator==(ModelState const&) const = default;

    std::string key() const;
    std::string pretty() const;
};

struct ModelConfig
{
    int name_count = 2;
    int version_count = 3;
    IdentityMode mode = IdentityMode::Ican;
    // Keep the reachable set in the report (small models only).
    bool collect_states = false;
};

struct Violation
{
    std::string invariant;
    // Transition-labelled path from the initial state to the violation.
    std::vector<std::string> trace;
};

struct InvariantReport
{
    std::size_t states_explored = 0;
    int max_depth = 0;
    std::vector<Violation> violations;
    std::vector<ModelState> states; // filled when collect_states

    bool ok() const
    {
        return violations.empty();
    }
};

// Breadth-first enumeration of every reachable state, checking four
// invariants on states and edges:
//   identity: the hash projection of every reachable state equals the
//     initial one (under Strawman the projection includes versions, and
//     canary entry falsifies it);
//   state: statuses stay inside the enum, edges inside the legal
//     relation, terminal states absorb;
//   versions: the active map changes only on the promote edge, and then
//     only the promoted name;
//   provisional: non-empty exactly in canary_running / canary_promoted.
// Throws std::invalid_argument for name_count < 1 or version_count < 2.
InvariantReport enumerate_reachable(ModelConfig const& cfg);

// Per-invariant result rows for the verify CSV:
// invariant,states,depth,violations
struct InvariantRow
{
    std::string invariant;
    std::size_t states = 0;
    int depth = 0;
    std::size_t violations = 0;
};

std::vector<InvariantRow> invariant_rows(InvariantReport const& report);

} // namespace icand::model
