// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/identity.hpp"

#include <stdexcept>

namespace icand
{

bool CapabilityName::valid(std::string_view value)
{
    if (value.empty() || value.size() > 64)
        return false;
    for (char c : value)
    {
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (!ok)
            return false;
    }
    return true;
}

CapabilityName::CapabilityName(std::string value) : value_(std::move(value))
{
    if (!valid(value_))
    {
        throw std::invalid_argument("capability name must match [a-z0-9_-]{1,64}: '" + value_ +
                                    "'");
    }
}

Digest registry_hash(NameSet const& names)
{
    std::string joined;
    bool first = true;
    for (auto const& name : names)
    {
        if (!first)
            joined.push_back('\n');
        joined += name.str();
        first = false;
    }
    return sha256(joined);
}

std::vector<std::uint8_t> encode_manifest(IdentityManifest const& m)
{
    std::vector<std::uint8_t> out;
    out.reserve(200 + m.prompt.size() + m.runtime_version.size());
    append_length_prefixed(out, m.prompt);
    append_length_prefixed(out, std::span<std::uint8_t const>(m.env_policy_hash));
    append_length_prefixed(out, std::span<std::uint8_t const>(m.runtime_policy_hash));
    append_length_prefixed(out, std::span<std::uint8_t const>(m.registry_hash));
    append_length_prefixed(out, std::span<std::uint8_t const>(m.persona_hash));
    append_length_prefixed(out, m.runtime_version);
    return out;
}

Digest identity_hash(IdentityManifest const& m)
{
    return sha256(encode_manifest(m));
}

std::string version_maps_blob(VersionMap const& active, VersionMap const& provisional)
{
    auto render = [](VersionMap const& map, std::string& out) {
        bool first = true;
        for (auto const& [name, version] : map)
        {
            if (!first)
                out.push_back('\n');
            out += name.str();
            out.push_back('=');
            out += version.str();
            first = false;
        }
    };
    std::string blob;
    render(active, blob);
    blob.push_back('\x1e');
    render(provisional, blob);
    return blob;
}

Digest identity_hash_with_versions(IdentityManifest const& m, VersionMap const& active,
                                   VersionMap const& provisional)
{
    auto encoded = encode_manifest(m);
    append_length_prefixed(encoded, version_maps_blob(active, provisional));
    return sha256(encoded);
}

} // namespace icand
