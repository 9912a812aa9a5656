// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/digest.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace icand
{

Digest sha256(std::span<std::uint8_t const> data)
{
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size())
    {
        throw std::runtime_error("sha256: EVP_Digest failed");
    }
    return out;
}

Digest sha256(std::string_view data)
{
    return sha256(std::span<std::uint8_t const>(
        reinterpret_cast<std::uint8_t const*>(data.data()), data.size()));
}

namespace
{
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}
} // namespace

std::string to_hex(Digest const& d)
{
    std::string out;
    out.reserve(64);
    for (auto b : d)
    {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0f]);
    }
    return out;
}

std::string hex8(Digest const& d)
{
    return to_hex(d).substr(0, 8);
}

std::optional<Digest> digest_from_hex(std::string_view hex)
{
    if (hex.size() != 64)
        return std::nullopt;
    Digest out{};
    for (std::size_t i = 0; i < 32; ++i)
    {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            return std::nullopt;
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

void append_length_prefixed(std::vector<std::uint8_t>& out, std::string_view bytes)
{
    append_length_prefixed(out, std::span<std::uint8_t const>(
                                    reinterpret_cast<std::uint8_t const*>(bytes.data()),
                                    bytes.size()));
}

void append_length_prefixed(std::vector<std::uint8_t>& out, std::span<std::uint8_t const> bytes)
{
    auto n = static_cast<std::uint32_t>(bytes.size());
    out.push_back(static_cast<std::uint8_t>(n >> 24));
    out.push_back(static_cast<std::uint8_t>(n >> 16));
    out.push_back(static_cast<std::uint8_t>(n >> 8));
    out.push_back(static_cast<std::uint8_t>(n));
    out.insert(out.end(), bytes.begin(), bytes.end());
}

void append_u64_be(std::vector<std::uint8_t>& out, std::uint64_t v)
{
    for (int shift = 56; shift >= 0; shift -= 8)
    {
        out.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

void append_i64_be(std::vector<std::uint8_t>& out, std::int64_t v)
{
    append_u64_be(out, static_cast<std::uint64_t>(v));
}

} // namespace icand
