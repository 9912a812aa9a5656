// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/semver.hpp"

#include <charconv>
#include <cstdio>

namespace icand
{

std::string SemVer::str() const
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "v%u.%u.%u", major, minor, patch);
    return buf;
}

SemVer SemVer::next_patch() const
{
    return SemVer{major, minor, patch + 1};
}

SemVer SemVer::next_minor() const
{
    return SemVer{major, minor + 1, 0};
}

namespace
{
// Strict decimal with no sign, no leading '+', full consumption of the
// component.
bool parse_u32(std::string_view text, std::uint32_t& out)
{
    if (text.empty())
        return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}
} // namespace

std::optional<SemVer> SemVer::parse(std::string_view text)
{
    if (!text.empty() && text.front() == 'v')
        text.remove_prefix(1);

    auto first_dot = text.find('.');
    if (first_dot == std::string_view::npos)
        return std::nullopt;
    auto second_dot = text.find('.', first_dot + 1);
    if (second_dot == std::string_view::npos)
        return std::nullopt;
    if (text.find('.', second_dot + 1) != std::string_view::npos)
        return std::nullopt;

    SemVer v;
    if (!parse_u32(text.substr(0, first_dot), v.major) ||
        !parse_u32(text.substr(first_dot + 1, second_dot - first_dot - 1), v.minor) ||
        !parse_u32(text.substr(second_dot + 1), v.patch))
    {
        return std::nullopt;
    }
    return v;
}

} // namespace icand
