// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include "icand/digest.hpp"
#include "icand/semver.hpp"

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace icand
{

// Registry key. Restricted to [a-z0-9_-], 1..64 bytes, so the canonical
// sorted-name encoding needs no escaping. Ordering is bytewise.
class CapabilityName
{
  public:
    // Throws std::invalid_argument on anything outside the charset.
    explicit CapabilityName(std::string value);

    std::string const& str() const
    {
        return value_;
    }

    auto operator<=>(CapabilityName const&) const = default;

    static bool valid(std::string_view value);

  private:
    std::string value_;
};

using NameSet = std::set<CapabilityName>;
using VersionMap = std::map<CapabilityName, SemVer>;

// The six identity-bearing fields. Capability names reach the hash only
// through registry_hash; versions never do.
struct IdentityManifest
{
    std::string prompt;
    Digest env_policy_hash{};
    Digest runtime_policy_hash{};
    Digest registry_hash{};
    Digest persona_hash{};
    std::string runtime_version;
};

// SHA-256 of the sorted names joined by '\n'. Empty set hashes the empty
// string.
Digest registry_hash(NameSet const& names);

// Canonical manifest encoding: the six fields in fixed order, each
// length-prefixed. Stable across platforms; goldens in the tests pin it.
std::vector<std::uint8_t> encode_manifest(IdentityManifest const& m);

// Identity hash as shipped: versions excluded.
Digest identity_hash(IdentityManifest const& m);

// Canonical text form of the two version maps, used only by the
// version-coupled variant: sorted "name=vX.Y.Z" lines for the active map,
// a 0x1e separator, then the same for the provisional map.
std::string version_maps_blob(VersionMap const& active, VersionMap const& provisional);

// Version-coupled variant: the manifest encoding plus the version blob as
// a seventh length-prefixed field. Every promote moves this hash.
Digest identity_hash_with_versions(IdentityManifest const& m, VersionMap const& active,
                                   VersionMap const& provisional);

} // namespace icand
