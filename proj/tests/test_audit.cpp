// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "icand/audit.hpp"
#include "icand/digest.hpp"

#include <algorithm>
#include <sstream>

using namespace icand;

namespace
{
Digest workshop_identity()
{
    return *digest_from_hex(
        "9a90e3974f3d1987f94c8b28d12d34aac68d67b02627492ae0127b189613ebc2");
}

AuditRecord golden_record()
{
    AuditRecord r;
    r.seq = 0;
    r.prev_digest.fill(0);
    r.kind = AuditKind::Transition;
    r.payload = "pending->validating";
    r.identity_at_write = workshop_identity();
    r.timestamp_ns = 1700000000123456789LL;
    return r;
}
} // namespace

TEST_CASE("record digest golden value")
{
    // Frozen against an independent encoder; covers the whole framing
    // (seq, prev link, kind tag, payload, identity, timestamp).
    CHECK(to_hex(audit_record_digest(golden_record())) ==
          "87a00876442dd2e08d00def8ad14796407d2a9f04d1faabb292b46805f3ee81e");
}

TEST_CASE("record digest covers every field")
{
    auto base = audit_record_digest(golden_record());

    auto r = golden_record();
    r.seq = 1;
    CHECK(audit_record_digest(r) != base);

    r = golden_record();
    r.prev_digest[31] = 1;
    CHECK(audit_record_digest(r) != base);

    r = golden_record();
    r.kind = AuditKind::Rekey;
    CHECK(audit_record_digest(r) != base);

    r = golden_record();
    r.payload = "pending->validatinh";
    CHECK(audit_record_digest(r) != base);

    r = golden_record();
    r.identity_at_write[0] ^= 0xff;
    CHECK(audit_record_digest(r) != base);

    r = golden_record();
    r.timestamp_ns += 1;
    CHECK(audit_record_digest(r) != base);
}

TEST_CASE("chain links and verifies")
{
    AuditChain chain;
    auto id = workshop_identity();
    chain.append(AuditKind::Transition, "pending->validating", id);
    chain.append(AuditKind::Transition, "validating->shadow_running", id);
    chain.append(AuditKind::Rekey, "persona", id);

    auto records = chain.snapshot();
    REQUIRE(records.size() == 3);
    CHECK(chain.size() == 3);
    CHECK(records[0].seq == 0);
    CHECK(records[0].prev_digest == Digest{});
    CHECK(records[1].prev_digest == records[0].self_digest);
    CHECK(records[2].prev_digest == records[1].self_digest);
    CHECK(records[1].seq == 1);
    CHECK(records[2].timestamp_ns >= records[0].timestamp_ns);
    CHECK(!chain.verify());
    CHECK(!verify_chain(records));
    CHECK(!verify_chain(std::span<AuditRecord const>{}));
}

TEST_CASE("tampering is caught at the first bad sequence")
{
    AuditChain chain;
    auto id = workshop_identity();
    for (int i = 0; i < 5; ++i)
        chain.append(AuditKind::Transition, "step " + std::to_string(i), id);

    auto payload_tampered = chain.snapshot();
    payload_tampered[2].payload = "step 2 (edited)";
    auto bad = verify_chain(payload_tampered);
    REQUIRE(bad);
    CHECK(*bad == 2);

    auto identity_tampered = chain.snapshot();
    identity_tampered[3].identity_at_write[7] ^= 0x01;
    bad = verify_chain(identity_tampered);
    REQUIRE(bad);
    CHECK(*bad == 3);

    auto time_tampered = chain.snapshot();
    time_tampered[0].timestamp_ns += 1;
    bad = verify_chain(time_tampered);
    REQUIRE(bad);
    CHECK(*bad == 0);

    // Rehashing a tampered record does not help: the successor's back
    // link no longer matches.
    auto relinked = chain.snapshot();
    relinked[1].payload = "forged";
    relinked[1].self_digest = audit_record_digest(relinked[1]);
    bad = verify_chain(relinked);
    REQUIRE(bad);
    CHECK(*bad == 2);

    // Reordering breaks seq continuity.
    auto swapped = chain.snapshot();
    std::swap(swapped[1], swapped[2]);
    CHECK(verify_chain(swapped));

    // Dropping an interior record is detected too.
    auto gapped = chain.snapshot();
    gapped.erase(gapped.begin() + 1);
    CHECK(verify_chain(gapped));
}

TEST_CASE("query by identity")
{
    AuditChain chain;
    auto a = sha256("identity a");
    auto b = sha256("identity b");
    chain.append(AuditKind::Transition, "one", a);
    chain.append(AuditKind::Transition, "two", b);
    chain.append(AuditKind::RollbackReason, "three", a);

    auto for_a = chain.by_identity(a);
    REQUIRE(for_a.size() == 2);
    CHECK(for_a[0].payload == "one");
    CHECK(for_a[1].payload == "three");
    CHECK(chain.by_identity(b).size() == 1);
    CHECK(chain.by_identity(sha256("identity c")).empty());
}

TEST_CASE("csv export escapes delimiters")
{
    AuditChain chain;
    chain.append(AuditKind::RollbackReason, "metrics, threshold\nbreached 100%", workshop_identity());
    std::ostringstream out;
    chain.export_csv(out);
    auto csv = out.str();

    auto header_end = csv.find('\n');
    REQUIRE(header_end != std::string::npos);
    CHECK(csv.substr(0, header_end) ==
          "seq,prev_hex,kind,payload,identity_hex,timestamp_iso,self_hex");

    auto body = csv.substr(header_end + 1);
    // Payload delimiters are percent-escaped so the row count equals the
    // record count.
    CHECK(body.find("metrics%2c threshold%0abreached 100%25") != std::string::npos);
    CHECK(std::count(body.begin(), body.end(), '\n') == 1);
    CHECK(std::count(body.begin(), body.end(), ',') == 6);
}

TEST_CASE("iso8601 rendering")
{
    CHECK(iso8601_ns(0) == "1970-01-01T00:00:00.000000000Z");
    CHECK(iso8601_ns(1700000000123456789LL) == "2023-11-14T22:13:20.123456789Z");
    CHECK(iso8601_ns(1000000000LL) == "1970-01-01T00:00:01.000000000Z");
}

TEST_CASE("kind names")
{
    CHECK(to_string(AuditKind::Transition) == "transition");
    CHECK(to_string(AuditKind::Rekey) == "rekey");
    CHECK(to_string(AuditKind::RollbackReason) == "rollback_reason");
    CHECK(to_string(AuditKind::SyntheticRestartRollback) == "synthetic_restart_rollback");
}
