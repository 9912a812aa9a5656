// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace icand
{

// Raw SHA-256 output. Identity hashes, registry hashes and audit record
// digests are all this type; equality is bytewise.
using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<std::uint8_t const> data);
Digest sha256(std::string_view data);

// 64 lowercase hex chars.
std::string to_hex(Digest const& d);

// First 8 hex chars; the short form used in trace CSVs.
std::string hex8(Digest const& d);

std::optional<Digest> digest_from_hex(std::string_view hex);

// Big-endian length prefix followed by the bytes. Every variable-length
// field that feeds a digest goes through this so no two field sequences
// can collide by concatenation.
void append_length_prefixed(std::vector<std::uint8_t>& out, std::string_view bytes);
void append_length_prefixed(std::vector<std::uint8_t>& out, std::span<std::uint8_t const> bytes);

void append_u64_be(std::vector<std::uint8_t>& out, std::uint64_t v);
void append_i64_be(std::vector<std::uint8_t>& out, std::int64_t v);

} // namespace icand
