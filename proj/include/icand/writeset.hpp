// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace icand
{

// Every mutable field a pipeline transition could touch. The six manifest
// fields feed the identity hash; a transition that writes any of them
// would move the hash, so the conformance check bans them outright.
enum class WriteField
{
    ActiveVersions,
    ProvisionalVersions,
    AuditLog,
    JobMetadata,
    ManifestPrompt,
    ManifestEnvPolicy,
    ManifestRuntimePolicy,
    ManifestRegistry,
    ManifestPersona,
    ManifestRuntimeVersion,
};

std::string_view to_string(WriteField f);
bool is_manifest_field(WriteField f);

using WriteSet = std::set<WriteField>;

// Transition name -> the exact fields that transition may write. Rollback
// and failure arcs are declared once under their family names
// "*->rolled_back" and "*->failed". Job phase and transition-log writes
// count as JobMetadata on every transition.
using WriteSetDeclaration = std::map<std::string, WriteSet>;

WriteSetDeclaration const& pipeline_write_declaration();

// Observed-writes recorder. The engine records its own writes per
// transition; the frozen-manifest guard records attempted manifest writes
// here before refusing them.
class WriteLog
{
  public:
    void record(std::string const& transition, WriteField field);

    std::map<std::string, WriteSet> observed() const;
    std::vector<std::pair<std::string, WriteField>> manifest_write_attempts() const;
    void clear();

  private:
    mutable std::mutex mutex_;
    std::map<std::string, WriteSet> observed_;
    std::vector<std::pair<std::string, WriteField>> manifest_attempts_;
};

struct WriteSetViolation
{
    std::string transition;
    WriteField field = WriteField::JobMetadata;
    std::string detail;
};

// nullopt when every observed write is covered by its transition's
// declared set and no manifest field appears anywhere; otherwise the
// first offending (transition, field).
std::optional<WriteSetViolation> check_write_sets(WriteSetDeclaration const& declared,
                                                  std::map<std::string, WriteSet> const& observed);

} // namespace icand
