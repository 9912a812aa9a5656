// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/audit.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace icand
{

std::string_view to_string(AuditKind k)
{
    switch (k)
    {
    case AuditKind::Transition:
        return "transition";
    case AuditKind::Rekey:
        return "rekey";
    case AuditKind::RollbackReason:
        return "rollback_reason";
    case AuditKind::SyntheticRestartRollback:
        return "synthetic_restart_rollback";
    }
    return "unknown";
}

Digest audit_record_digest(AuditRecord const& r)
{
    std::vector<std::uint8_t> buf;
    buf.reserve(160 + r.payload.size());

    std::vector<std::uint8_t> seq_bytes;
    append_u64_be(seq_bytes, r.seq);
    append_length_prefixed(buf, std::span<std::uint8_t const>(seq_bytes));

    append_length_prefixed(buf, std::span<std::uint8_t const>(r.prev_digest));
    append_length_prefixed(buf, to_string(r.kind));
    append_length_prefixed(buf, r.payload);
    append_length_prefixed(buf, std::span<std::uint8_t const>(r.identity_at_write));

    std::vector<std::uint8_t> ts_bytes;
    append_i64_be(ts_bytes, r.timestamp_ns);
    append_length_prefixed(buf, std::span<std::uint8_t const>(ts_bytes));

    return sha256(std::span<std::uint8_t const>(buf));
}

std::optional<std::uint64_t> verify_chain(std::span<AuditRecord const> records)
{
    Digest expected_prev{}; // genesis back-link is all zero
    std::uint64_t expected_seq = 0;
    for (auto const& r : records)
    {
        if (r.seq != expected_seq || r.prev_digest != expected_prev ||
            audit_record_digest(r) != r.self_digest)
        {
            return r.seq;
        }
        expected_prev = r.self_digest;
        ++expected_seq;
    }
    return std::nullopt;
}

AuditRecord AuditChain::append(AuditKind kind, std::string payload, Digest const& identity_at_write)
{
    auto now = std::chrono::duration_cast<std::chrono::nanoseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
                   .count();

    std::lock_guard<std::mutex> lock(mutex_);
    AuditRecord r;
    r.seq = records_.size();
    r.prev_digest = records_.empty() ? Digest{} : records_.back().self_digest;
    r.kind = kind;
    r.payload = std::move(payload);
    r.identity_at_write = identity_at_write;
    r.timestamp_ns = now;
    r.self_digest = audit_record_digest(r);
    records_.push_back(r);
    return r;
}

std::size_t AuditChain::size() const
{
    std::lock_guard<std::mutex> lock(mutex_);
    return records_.size();
}

std::vector<AuditRecord> AuditChain::snapshot() const
{
    std::lock_guard<std::mutex> lock(mutex_);
    return records_;
}

std::optional<std::uint64_t> AuditChain::verify() const
{
    auto records = snapshot();
    return verify_chain(records);
}

std::vector<AuditRecord> AuditChain::by_identity(Digest const& identity) const
{
    std::vector<AuditRecord> out;
    for (auto const& r : snapshot())
    {
        if (r.identity_at_write == identity)
            out.push_back(r);
    }
    return out;
}

namespace
{
// Keep payloads one-per-line and comma-free in the CSV.
std::string escape_csv_field(std::string const& s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s)
    {
        if (c == ',' || c == '\n' || c == '\r' || c == '%')
        {
            char buf[4];
            std::snprintf(buf, sizeof(buf), "%%%02x", static_cast<unsigned char>(c));
            out += buf;
        }
        else
        {
            out.push_back(c);
        }
    }
    return out;
}
} // namespace

void AuditChain::export_csv(std::ostream& out) const
{
    out << "seq,prev_hex,kind,payload,identity_hex,timestamp_iso,self_hex\n";
    for (auto const& r : snapshot())
    {
        out << r.seq << ',' << to_hex(r.prev_digest) << ',' << to_string(r.kind) << ','
            << escape_csv_field(r.payload) << ',' << to_hex(r.identity_at_write) << ','
            << iso8601_ns(r.timestamp_ns) << ',' << to_hex(r.self_digest) << '\n';
    }
}

std::string iso8601_ns(std::int64_t ns)
{
    std::int64_t secs = ns / 1000000000;
    std::int64_t frac = ns % 1000000000;
    if (frac < 0)
    {
        frac += 1000000000;
        secs -= 1;
    }
    std::time_t t = static_cast<std::time_t>(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%09lldZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                  static_cast<long long>(frac));
    return buf;
}

} // namespace icand
