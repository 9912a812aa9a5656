// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/mode.hpp"

#include <cstdlib>
#include <string>

namespace icand
{

std::string_view to_string(IdentityMode m)
{
    return m == IdentityMode::Ican ? "ican" : "strawman";
}

std::optional<IdentityMode> identity_mode_from_string(std::string_view s)
{
    if (s == "ican")
        return IdentityMode::Ican;
    if (s == "strawman")
        return IdentityMode::Strawman;
    return std::nullopt;
}

bool identity_includes_versions_from_env()
{
    for (auto const* key : {"ICAND_IDENTITY_INCLUDES_VERSIONS", "IDENTITY_INCLUDES_VERSIONS"})
    {
        if (char const* v = std::getenv(key))
        {
            std::string val(v);
            if (val == "1" || val == "true")
                return true;
        }
    }
    return false;
}

} // namespace icand
