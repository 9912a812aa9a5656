// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#include "icand/http_api.hpp"

#include "icand/errors.hpp"

#include <httplib.h>
#include <json.hpp>

namespace icand
{

namespace
{
using nlohmann::json;

void reply_json(httplib::Response& res, int status, json body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

json job_view(Engine const& engine, EvolutionJob const& job)
{
    json rows = json::array();
    for (auto const& row : job.transition_log)
    {
        rows.push_back({{"status_after", std::string(to_string(row.status_after))},
                        {"identity_hash_hex", row.identity_hex},
                        {"timestamp_ns", row.timestamp_ns}});
    }
    return json{{"job_id", job.id},
                {"capability", job.capability.str()},
                {"status", std::string(to_string(job.status))},
                {"identity_hash_hex", engine.identity_hex()},
                {"target_version", job.target_version.str()},
                {"prior_version", job.prior_version.str()},
                {"transition_log", std::move(rows)},
                {"failure_reason",
                 job.failure_reason ? json(*job.failure_reason) : json(nullptr)}};
}
} // namespace

ApiServer::ApiServer(Engine& engine) : engine_(engine), server_(std::make_unique<httplib::Server>())
{
    setup_routes();
}

ApiServer::~ApiServer()
{
    stop();
}

void ApiServer::setup_routes()
{
    auto& srv = *server_;

    srv.Post("/api/evolution/upgrade", [this](httplib::Request const& req,
                                              httplib::Response& res) {
        json body = json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.is_object() || !body.contains("capability") ||
            !body.contains("version") || !body["capability"].is_string() ||
            !body["version"].is_string())
        {
            reply_json(res, 422, {{"error", "body must carry capability and version strings"}});
            return;
        }
        auto capability = body["capability"].get<std::string>();
        if (!CapabilityName::valid(capability))
        {
            reply_json(res, 422, {{"error", "malformed capability name"}});
            return;
        }
        auto version = SemVer::parse(body["version"].get<std::string>());
        if (!version)
        {
            reply_json(res, 422, {{"error", "malformed version; expected vX.Y.Z"}});
            return;
        }

        SubmitOverrides overrides;
        if (body.contains("soak_ticks"))
            overrides.soak_ticks = body["soak_ticks"].get<int>();
        if (body.contains("tick_interval_ms"))
            overrides.tick_interval =
                std::chrono::milliseconds(body["tick_interval_ms"].get<int>());
        if (body.contains("metrics_threshold"))
            overrides.metrics_threshold = body["metrics_threshold"].get<std::uint64_t>();

        auto result = engine_.submit_upgrade(CapabilityName(capability), *version, overrides);
        switch (result.kind)
        {
        case SubmitResult::Kind::UnknownCapability:
            reply_json(res, 422, {{"error", "unknown capability: " + capability}});
            return;
        case SubmitResult::Kind::Conflict:
            res.set_header("Location", "/api/evolution/job/" + result.job_id);
            reply_json(res, 409,
                       {{"error", "capability has a live evolution job"},
                        {"job_id", result.job_id}});
            return;
        case SubmitResult::Kind::Accepted:
            engine_.start_job(result.job_id);
            reply_json(res, 202,
                       {{"job_id", result.job_id},
                        {"poll_url", "/api/evolution/job/" + result.job_id}});
            return;
        }
    });

    srv.Get("/api/evolution/job/:id", [this](httplib::Request const& req,
                                             httplib::Response& res) {
        auto job = engine_.job_snapshot(req.path_params.at("id"));
        if (!job)
        {
            reply_json(res, 404, {{"error", "unknown job id"}});
            return;
        }
        reply_json(res, 200, job_view(engine_, *job));
    });

    srv.Post("/api/evolution/job/:id/abort", [this](httplib::Request const& req,
                                                    httplib::Response& res) {
        auto const& id = req.path_params.at("id");
        if (!engine_.abort_job(id))
        {
            reply_json(res, 404, {{"error", "unknown job id"}});
            return;
        }
        reply_json(res, 200, job_view(engine_, *engine_.job_snapshot(id)));
    });

    srv.Post("/api/agent/install", [this](httplib::Request const& req, httplib::Response& res) {
        json body = json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.is_object() || !body.contains("name") ||
            !body.contains("version") || !body["name"].is_string() ||
            !body["version"].is_string())
        {
            reply_json(res, 422, {{"error", "body must carry name and version strings"}});
            return;
        }
        auto name = body["name"].get<std::string>();
        auto version = SemVer::parse(body["version"].get<std::string>());
        if (!CapabilityName::valid(name) || !version)
        {
            reply_json(res, 422, {{"error", "malformed name or version"}});
            return;
        }
        try
        {
            auto identity = engine_.install_capability(CapabilityName(name), *version);
            reply_json(res, 200, {{"identity_hash_hex", to_hex(identity)}});
        }
        catch (DuplicateCapabilityError const& e)
        {
            reply_json(res, 409, {{"error", e.what()}});
        }
    });

    srv.Delete("/api/agent/capabilities/:name", [this](httplib::Request const& req,
                                                       httplib::Response& res) {
        auto const& name = req.path_params.at("name");
        if (!CapabilityName::valid(name))
        {
            reply_json(res, 404, {{"error", "malformed capability name"}});
            return;
        }
        try
        {
            auto identity = engine_.remove_capability(CapabilityName(name));
            reply_json(res, 200, {{"identity_hash_hex", to_hex(identity)}});
        }
        catch (UnknownCapabilityError const& e)
        {
            reply_json(res, 404, {{"error", e.what()}});
        }
        catch (CapabilityBusyError const& e)
        {
            reply_json(res, 409, {{"error", e.what()}});
        }
    });

    srv.Get("/api/agent/identity", [this](httplib::Request const&, httplib::Response& res) {
        auto view = engine_.agent_view();
        reply_json(res, 200,
                   {{"identity_hash_hex", view.identity_hex},
                    {"manifest_fields",
                     {{"prompt", view.prompt},
                      {"env_policy_hash_hex", view.env_policy_hash_hex},
                      {"runtime_policy_hash_hex", view.runtime_policy_hash_hex},
                      {"registry_hash_hex", view.registry_hash_hex},
                      {"persona_hash_hex", view.persona_hash_hex},
                      {"runtime_version", view.runtime_version}}},
                    {"names", view.names},
                    {"active_versions", view.active_versions},
                    {"provisional_versions", view.provisional_versions}});
    });
}

bool ApiServer::listen(std::string const& host, int port)
{
    return server_->listen(host, port);
}

int ApiServer::start_async(std::string const& host)
{
    int port = server_->bind_to_any_port(host);
    if (port < 0)
        return port;
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port;
}

void ApiServer::stop()
{
    if (server_)
        server_->stop();
    if (thread_.joinable())
        thread_.join();
}

} // namespace icand
