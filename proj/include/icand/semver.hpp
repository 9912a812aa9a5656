// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace icand
{

// Three-component version. Canonical text form is "vMAJOR.MINOR.PATCH";
// parse also accepts the bare "MAJOR.MINOR.PATCH".
struct SemVer
{
    std::uint32_t major = 0;
    std::uint32_t minor = 0;
    std::uint32_t patch = 0;

    auto operator<=>(SemVer const&) const = default;

    std::string str() const;

    SemVer next_patch() const;
    SemVer next_minor() const;

    static std::optional<SemVer> parse(std::string_view text);
};

} // namespace icand
