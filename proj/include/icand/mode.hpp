// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include <optional>
#include <string_view>

namespace icand
{

// Which identity construction a run uses. Ican is the shipped one
// (versions excluded from the hash); Strawman folds the version maps in
// and exists to demonstrate the drift that causes.
enum class IdentityMode
{
    Ican,
    Strawman,
};

std::string_view to_string(IdentityMode m);
std::optional<IdentityMode> identity_mode_from_string(std::string_view s);

inline bool identity_includes_versions(IdentityMode m)
{
    return m == IdentityMode::Strawman;
}

// True when ICAND_IDENTITY_INCLUDES_VERSIONS or IDENTITY_INCLUDES_VERSIONS
// is set to "1" or "true".
bool identity_includes_versions_from_env();

} // namespace icand
