// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include "icand/digest.hpp"

#include <cstdint>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace icand
{

enum class AuditKind
{
    Transition,
    Rekey,
    RollbackReason,
    SyntheticRestartRollback,
};

std::string_view to_string(AuditKind k);

// One hash-chained entry. self_digest covers every other field through the
// canonical encoding below, and prev_digest is the previous record's
// self_digest (all zero for the first record), so editing any stored field
// breaks verification from that point on.
struct AuditRecord
{
    std::uint64_t seq = 0;
    Digest prev_digest{};
    AuditKind kind = AuditKind::Transition;
    std::string payload;
    Digest identity_at_write{};
    std::int64_t timestamp_ns = 0; // UTC wall clock, ns since epoch
    Digest self_digest{};
};

// Canonical record encoding: u64 seq, prev digest, kind string, payload,
// identity, i64 timestamp; integers big-endian, every field
// length-prefixed.
Digest audit_record_digest(AuditRecord const& r);

// nullopt if the chain links check out end to end, else the seq of the
// first record whose digest or back-link is wrong.
std::optional<std::uint64_t> verify_chain(std::span<AuditRecord const> records);

// Append-only in-memory chain. Appends are serialized internally; reads
// hand out snapshots.
class AuditChain
{
  public:
    AuditRecord append(AuditKind kind, std::string payload, Digest const& identity_at_write);

    std::size_t size() const;
    std::vector<AuditRecord> snapshot() const;
    std::optional<std::uint64_t> verify() const;

    // Every record stamped with the given identity, in chain order.
    std::vector<AuditRecord> by_identity(Digest const& identity) const;

    // CSV lines: seq,prev_hex,kind,payload,identity_hex,timestamp_iso,self_hex
    void export_csv(std::ostream& out) const;

  private:
    mutable std::mutex mutex_;
    std::vector<AuditRecord> records_;
};

// "YYYY-MM-DDTHH:MM:SS.sssssssssZ" for a UTC ns-since-epoch stamp.
std::string iso8601_ns(std::int64_t ns);

} // namespace icand
