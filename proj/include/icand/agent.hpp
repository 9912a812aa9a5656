// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include "icand/digest.hpp"
#include "icand/identity.hpp"
#include "icand/semver.hpp"
#include "icand/writeset.hpp"

#include <map>
#include <optional>
#include <string>

namespace icand
{

class AuditChain;

struct AgentConfig
{
    std::string prompt;
    std::string env_policy_doc;
    std::string runtime_policy_doc;
    std::string persona = "default";
    std::string runtime_version = "0.1.0";
    // Initial registry: name -> active version.
    std::map<std::string, SemVer> capabilities;
    // Version-coupled identity variant; the shipped construction leaves
    // this off so the hash survives upgrades.
    bool identity_includes_versions = false;
};

// Interposed on every manifest-field mutation. The engine's implementation
// refuses writes arriving from inside a pipeline transition.
class ManifestGuard
{
  public:
    virtual ~ManifestGuard() = default;
    virtual void on_manifest_write(WriteField field) = 0;
};

// Owns the identity manifest, the capability registry and the two version
// maps. Not internally synchronized; the engine serializes access.
class Agent
{
  public:
    explicit Agent(AgentConfig const& cfg, AuditChain* audit = nullptr);

    IdentityManifest const& manifest() const;
    NameSet const& names() const;
    VersionMap const& active_versions() const;
    VersionMap const& provisional_versions() const;
    bool identity_includes_versions() const;

    Digest identity() const;
    std::string identity_hex() const;

    // Manifest mutations. Each consults the guard first, recomputes the
    // affected hashes, and appends a rekey audit record with the new
    // identity. All return the new identity hash.
    Digest register_capability(CapabilityName const& name, SemVer const& version);
    Digest deregister_capability(CapabilityName const& name);
    Digest set_persona(std::string persona, bool rekey_acknowledged);
    Digest set_policy_documents(std::optional<std::string> env_doc,
                                std::optional<std::string> runtime_doc);

    // Version-map writes used by the pipeline. Deliberately not guarded:
    // they are the mutable state the identity hash is designed to exclude.
    void set_provisional(CapabilityName const& name, SemVer const& version);
    bool clear_provisional(CapabilityName const& name);
    void set_active(CapabilityName const& name, SemVer const& version);

    void set_guard(ManifestGuard* guard);

  private:
    void guard_write(WriteField field);
    void audit_rekey(std::string detail);

    IdentityManifest manifest_;
    NameSet names_;
    VersionMap active_;
    VersionMap provisional_;
    bool include_versions_ = false;
    ManifestGuard* guard_ = nullptr;
    AuditChain* audit_ = nullptr;
};

} // namespace icand
