// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/agent.hpp"

#include "icand/audit.hpp"
#include "icand/errors.hpp"

namespace icand
{

Agent::Agent(AgentConfig const& cfg, AuditChain* audit)
    : include_versions_(cfg.identity_includes_versions), audit_(audit)
{
    manifest_.prompt = cfg.prompt;
    manifest_.env_policy_hash = sha256(cfg.env_policy_doc);
    manifest_.runtime_policy_hash = sha256(cfg.runtime_policy_doc);
    manifest_.persona_hash = sha256(cfg.persona);
    manifest_.runtime_version = cfg.runtime_version;
    for (auto const& [name, version] : cfg.capabilities)
    {
        CapabilityName key(name);
        if (!active_.emplace(key, version).second)
            throw DuplicateCapabilityError("duplicate capability in config: " + name);
        names_.insert(key);
    }
    manifest_.registry_hash = registry_hash(names_);
}

IdentityManifest const& Agent::manifest() const
{
    return manifest_;
}

NameSet const& Agent::names() const
{
    return names_;
}

VersionMap const& Agent::active_versions() const
{
    return active_;
}

VersionMap const& Agent::provisional_versions() const
{
    return provisional_;
}

bool Agent::identity_includes_versions() const
{
    return include_versions_;
}

Digest Agent::identity() const
{
    if (include_versions_)
        return identity_hash_with_versions(manifest_, active_, provisional_);
    return identity_hash(manifest_);
}

std::string Agent::identity_hex() const
{
    return to_hex(identity());
}

Digest Agent::register_capability(CapabilityName const& name, SemVer const& version)
{
    guard_write(WriteField::ManifestRegistry);
    if (names_.contains(name))
        throw DuplicateCapabilityError("capability already registered: " + name.str());
    names_.insert(name);
    active_.emplace(name, version);
    manifest_.registry_hash = registry_hash(names_);
    audit_rekey("register " + name.str() + " " + version.str());
    return identity();
}

Digest Agent::deregister_capability(CapabilityName const& name)
{
    guard_write(WriteField::ManifestRegistry);
    if (!names_.contains(name))
        throw UnknownCapabilityError("capability not registered: " + name.str());
    names_.erase(name);
    active_.erase(name);
    provisional_.erase(name);
    manifest_.registry_hash = registry_hash(names_);
    audit_rekey("deregister " + name.str());
    return identity();
}

Digest Agent::set_persona(std::string persona, bool rekey_acknowledged)
{
    guard_write(WriteField::ManifestPersona);
    if (!rekey_acknowledged)
    {
        throw RekeyNotAcknowledgedError(
            "persona edits change the identity hash; pass rekey_acknowledged");
    }
    manifest_.persona_hash = sha256(persona);
    audit_rekey("persona updated");
    return identity();
}

Digest Agent::set_policy_documents(std::optional<std::string> env_doc,
                                   std::optional<std::string> runtime_doc)
{
    if (env_doc)
    {
        guard_write(WriteField::ManifestEnvPolicy);
        manifest_.env_policy_hash = sha256(*env_doc);
    }
    if (runtime_doc)
    {
        guard_write(WriteField::ManifestRuntimePolicy);
        manifest_.runtime_policy_hash = sha256(*runtime_doc);
    }
    if (env_doc || runtime_doc)
        audit_rekey("policy documents updated");
    return identity();
}

void Agent::set_provisional(CapabilityName const& name, SemVer const& version)
{
    provisional_[name] = version;
}

bool Agent::clear_provisional(CapabilityName const& name)
{
    return provisional_.erase(name) > 0;
}

void Agent::set_active(CapabilityName const& name, SemVer const& version)
{
    active_[name] = version;
}

void Agent::set_guard(ManifestGuard* guard)
{
    guard_ = guard;
}

void Agent::guard_write(WriteField field)
{
    if (guard_)
        guard_->on_manifest_write(field);
}

void Agent::audit_rekey(std::string detail)
{
    if (audit_)
        audit_->append(AuditKind::Rekey, std::move(detail), identity());
}

} // namespace icand
