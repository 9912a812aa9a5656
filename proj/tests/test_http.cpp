// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "icand/bench.hpp"
#include "icand/http_api.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <thread>

using namespace icand;
using nlohmann::json;
using namespace std::chrono_literals;

namespace
{
char const* const kGoldenIdentity =
    "9a90e3974f3d1987f94c8b28d12d34aac68d67b02627492ae0127b189613ebc2";

struct TestServer
{
    Engine engine;
    ApiServer api;
    httplib::Client client;

    explicit TestServer(EngineConfig cfg = {})
        : engine(bench::workshop_agent_config(), cfg), api(engine),
          client("127.0.0.1", [this] {
              int port = api.start_async("127.0.0.1");
              REQUIRE(port > 0);
              return port;
          }())
    {
        client.set_connection_timeout(5, 0);
        client.set_read_timeout(5, 0);
    }

    ~TestServer()
    {
        api.stop();
    }

    json get_json(std::string const& path, int expected_status)
    {
        auto res = client.Get(path);
        REQUIRE(res);
        REQUIRE(res->status == expected_status);
        return json::parse(res->body);
    }

    json post_json(std::string const& path, json body, int expected_status)
    {
        auto res = client.Post(path, body.dump(), "application/json");
        REQUIRE(res);
        REQUIRE(res->status == expected_status);
        return json::parse(res->body);
    }

    json poll_until_terminal(std::string const& poll_url)
    {
        auto deadline = std::chrono::steady_clock::now() + 10s;
        while (std::chrono::steady_clock::now() < deadline)
        {
            auto view = get_json(poll_url, 200);
            auto status = job_status_from_string(view["status"].get<std::string>());
            REQUIRE(status);
            if (is_terminal(*status))
                return view;
            std::this_thread::sleep_for(2ms);
        }
        FAIL("job did not reach a terminal status in time");
        return {};
    }
};
} // namespace

TEST_CASE("identity endpoint exposes the manifest surface")
{
    TestServer ts;
    auto body = ts.get_json("/api/agent/identity", 200);

    CHECK(body["identity_hash_hex"] == kGoldenIdentity);
    CHECK(body["manifest_fields"]["prompt"] == "You are a careful workshop robot.");
    CHECK(body["manifest_fields"]["env_policy_hash_hex"] ==
          "a21253e9f88c24e511dc42bc87361322ee170196afe8a59aafe54a2044bcac15");
    CHECK(body["manifest_fields"]["runtime_policy_hash_hex"] ==
          "ace84ea9078b650fcb6f5bd9d56fffe8e4fd20e6a3583f9c2916f1dae542991d");
    CHECK(body["manifest_fields"]["persona_hash_hex"] ==
          "37a8eec1ce19687d132fe29051dca629d164e2c4958ba141d5f4133a33f0688f");
    CHECK(body["manifest_fields"]["registry_hash_hex"] ==
          "eaac9f5ea1b279a78ca3d993c0ccf1c7b17819104882b984011e4a55954f1866");
    CHECK(body["manifest_fields"]["runtime_version"] == "0.1.0");
    CHECK(body["names"] == json::array({"grasp", "place"}));
    CHECK(body["active_versions"]["grasp"] == "v1.0.0");
    CHECK(body["provisional_versions"].empty());
}

TEST_CASE("upgrade flow end to end over http")
{
    TestServer ts;
    auto accepted = ts.post_json(
        "/api/evolution/upgrade",
        {{"capability", "grasp"}, {"version", "v1.1.0"}, {"soak_ticks", 3},
         {"tick_interval_ms", 5}},
        202);
    CHECK(accepted["job_id"] == "job-1");
    CHECK(accepted["poll_url"] == "/api/evolution/job/job-1");

    auto final_view = ts.poll_until_terminal("/api/evolution/job/job-1");
    CHECK(final_view["status"] == "promoted");
    CHECK(final_view["capability"] == "grasp");
    CHECK(final_view["target_version"] == "v1.1.0");
    CHECK(final_view["prior_version"] == "v1.0.0");
    CHECK(final_view["failure_reason"].is_null());
    CHECK(final_view["identity_hash_hex"] == kGoldenIdentity);

    auto const& rows = final_view["transition_log"];
    REQUIRE(rows.size() == 7);
    CHECK(rows.front()["status_after"] == "pending");
    CHECK(rows.back()["status_after"] == "promoted");
    for (auto const& row : rows)
        CHECK(row["identity_hash_hex"] == kGoldenIdentity);

    auto identity = ts.get_json("/api/agent/identity", 200);
    CHECK(identity["identity_hash_hex"] == kGoldenIdentity);
    CHECK(identity["active_versions"]["grasp"] == "v1.1.0");
}

TEST_CASE("identity stays constant while a canary window is open")
{
    TestServer ts;
    auto accepted = ts.post_json(
        "/api/evolution/upgrade",
        {{"capability", "grasp"}, {"version", "v1.1.0"}, {"soak_ticks", 100},
         {"tick_interval_ms", 10}},
        202);
    auto poll_url = accepted["poll_url"].get<std::string>();

    // Wait until the window opens, then sample the identity mid-window.
    bool saw_window = false;
    auto deadline = std::chrono::steady_clock::now() + 5s;
    while (std::chrono::steady_clock::now() < deadline)
    {
        auto view = ts.get_json(poll_url, 200);
        if (view["status"] == "canary_running")
        {
            saw_window = true;
            break;
        }
        std::this_thread::sleep_for(2ms);
    }
    REQUIRE(saw_window);

    auto identity = ts.get_json("/api/agent/identity", 200);
    CHECK(identity["identity_hash_hex"] == kGoldenIdentity);
    CHECK(identity["provisional_versions"]["grasp"] == "v1.1.0");

    // A competing submit conflicts and points at the live job.
    auto res = ts.client.Post("/api/evolution/upgrade",
                              json{{"capability", "grasp"}, {"version", "v1.2.0"}}.dump(),
                              "application/json");
    REQUIRE(res);
    CHECK(res->status == 409);
    CHECK(res->get_header_value("Location") == "/api/evolution/job/job-1");
    CHECK(json::parse(res->body)["job_id"] == "job-1");

    // Abort closes the window and clears the provisional entry.
    auto aborted = ts.post_json(poll_url + "/abort", json::object(), 200);
    CHECK(aborted["status"] == "rolled_back");
    CHECK(aborted["failure_reason"] == "aborted by operator");

    identity = ts.get_json("/api/agent/identity", 200);
    CHECK(identity["identity_hash_hex"] == kGoldenIdentity);
    CHECK(identity["provisional_versions"].empty());

    // Aborting a terminal job is a no-op that still reports its view.
    auto again = ts.post_json(poll_url + "/abort", json::object(), 200);
    CHECK(again["status"] == "rolled_back");
}

TEST_CASE("upgrade request validation")
{
    TestServer ts;

    // Unknown capability.
    ts.post_json("/api/evolution/upgrade", {{"capability", "fly"}, {"version", "v1.0.0"}}, 422);
    // Malformed version.
    ts.post_json("/api/evolution/upgrade", {{"capability", "grasp"}, {"version", "1.1"}}, 422);
    // Malformed name.
    ts.post_json("/api/evolution/upgrade", {{"capability", "Grasp!"}, {"version", "v1.0.0"}}, 422);
    // Missing fields.
    ts.post_json("/api/evolution/upgrade", {{"capability", "grasp"}}, 422);

    // Broken JSON body.
    auto res = ts.client.Post("/api/evolution/upgrade", "{not json", "application/json");
    REQUIRE(res);
    CHECK(res->status == 422);

    // Nothing was admitted.
    CHECK(ts.engine.job_ids().empty());
}

TEST_CASE("job lookup 404s on unknown ids")
{
    TestServer ts;
    auto res = ts.client.Get("/api/evolution/job/job-42");
    REQUIRE(res);
    CHECK(res->status == 404);
    auto abort_res = ts.client.Post("/api/evolution/job/job-42/abort", "", "application/json");
    REQUIRE(abort_res);
    CHECK(abort_res->status == 404);
}

TEST_CASE("capability install and removal over http")
{
    TestServer ts;

    auto installed = ts.post_json("/api/agent/install", {{"name", "pour"}, {"version", "v0.1.0"}},
                                  200);
    auto rekeyed = installed["identity_hash_hex"].get<std::string>();
    CHECK(rekeyed != kGoldenIdentity);
    CHECK(ts.get_json("/api/agent/identity", 200)["identity_hash_hex"] == rekeyed);

    // Duplicate install.
    ts.post_json("/api/agent/install", {{"name", "pour"}, {"version", "v0.1.0"}}, 409);
    // Malformed body.
    ts.post_json("/api/agent/install", {{"name", "Pour"}, {"version", "v0.1.0"}}, 422);
    ts.post_json("/api/agent/install", {{"name", "pour2"}}, 422);

    // Removal restores the golden hash.
    auto removed = ts.client.Delete("/api/agent/capabilities/pour");
    REQUIRE(removed);
    CHECK(removed->status == 200);
    CHECK(json::parse(removed->body)["identity_hash_hex"] == kGoldenIdentity);

    // Unknown and busy removals.
    auto missing = ts.client.Delete("/api/agent/capabilities/pour");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    ts.post_json("/api/evolution/upgrade",
                 {{"capability", "grasp"}, {"version", "v1.1.0"}, {"soak_ticks", 100},
                  {"tick_interval_ms", 10}},
                 202);
    auto busy = ts.client.Delete("/api/agent/capabilities/grasp");
    REQUIRE(busy);
    CHECK(busy->status == 409);
}
