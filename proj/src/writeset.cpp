// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/writeset.hpp"

namespace icand
{

std::string_view to_string(WriteField f)
{
    switch (f)
    {
    case WriteField::ActiveVersions:
        return "active_versions";
    case WriteField::ProvisionalVersions:
        return "provisional_versions";
    case WriteField::AuditLog:
        return "audit_log";
    case WriteField::JobMetadata:
        return "job_metadata";
    case WriteField::ManifestPrompt:
        return "manifest_prompt";
    case WriteField::ManifestEnvPolicy:
        return "manifest_env_policy";
    case WriteField::ManifestRuntimePolicy:
        return "manifest_runtime_policy";
    case WriteField::ManifestRegistry:
        return "manifest_registry";
    case WriteField::ManifestPersona:
        return "manifest_persona";
    case WriteField::ManifestRuntimeVersion:
        return "manifest_runtime_version";
    }
    return "unknown";
}

bool is_manifest_field(WriteField f)
{
    switch (f)
    {
    case WriteField::ManifestPrompt:
    case WriteField::ManifestEnvPolicy:
    case WriteField::ManifestRuntimePolicy:
    case WriteField::ManifestRegistry:
    case WriteField::ManifestPersona:
    case WriteField::ManifestRuntimeVersion:
        return true;
    default:
        return false;
    }
}

WriteSetDeclaration const& pipeline_write_declaration()
{
    using F = WriteField;
    static WriteSetDeclaration const decl = {
        {"pending->validating", {F::JobMetadata}},
        {"validating->shadow_running", {F::JobMetadata}},
        {"shadow_running->shadow_passed", {F::JobMetadata, F::AuditLog}},
        {"shadow_passed->canary_running", {F::ProvisionalVersions, F::AuditLog, F::JobMetadata}},
        {"canary_running->canary_promoted", {F::JobMetadata, F::AuditLog}},
        {"canary_promoted->promoted",
         {F::ActiveVersions, F::ProvisionalVersions, F::AuditLog, F::JobMetadata}},
        {"*->rolled_back", {F::ProvisionalVersions, F::AuditLog, F::JobMetadata}},
        {"validating->rejected", {F::JobMetadata}},
        {"shadow_running->rejected", {F::JobMetadata}},
        {"*->failed", {F::ProvisionalVersions, F::AuditLog, F::JobMetadata}},
    };
    return decl;
}

void WriteLog::record(std::string const& transition, WriteField field)
{
    std::lock_guard<std::mutex> lock(mutex_);
    observed_[transition].insert(field);
    if (is_manifest_field(field))
        manifest_attempts_.emplace_back(transition, field);
}

std::map<std::string, WriteSet> WriteLog::observed() const
{
    std::lock_guard<std::mutex> lock(mutex_);
    return observed_;
}

std::vector<std::pair<std::string, WriteField>> WriteLog::manifest_write_attempts() const
{
    std::lock_guard<std::mutex> lock(mutex_);
    return manifest_attempts_;
}

void WriteLog::clear()
{
    std::lock_guard<std::mutex> lock(mutex_);
    observed_.clear();
    manifest_attempts_.clear();
}

std::optional<WriteSetViolation> check_write_sets(WriteSetDeclaration const& declared,
                                                  std::map<std::string, WriteSet> const& observed)
{
    for (auto const& [transition, fields] : observed)
    {
        auto decl = declared.find(transition);
        for (auto field : fields)
        {
            if (is_manifest_field(field))
            {
                return WriteSetViolation{transition, field,
                                         "manifest field written during pipeline transition"};
            }
            if (decl == declared.end())
            {
                return WriteSetViolation{transition, field, "transition has no declared write set"};
            }
            if (!decl->second.contains(field))
            {
                return WriteSetViolation{transition, field,
                                         "write outside the declared set for this transition"};
            }
        }
    }
    return std::nullopt;
}

} // namespace icand
