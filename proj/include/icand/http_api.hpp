// Copyright 2026 the icand authors. Licensed
// under the Apache License, Version 2.0. See the
// LICENSE file at the root of this distribution.

#pragma once

#include "icand/engine.hpp"

#include <memory>
#include <string>
#include <thread>

namespace httplib
{
class Server;
}

namespace icand
{

// JSON control surface over a running engine:
//   POST   /api/evolution/upgrade            submit an upgrade (202, 409, 422)
//   GET    /api/evolution/job/:id            job view (404 unknown)
//   POST   /api/evolution/job/:id/abort      roll back a live job
//   POST   /api/agent/install                register a capability (409 dup)
//   DELETE /api/agent/capabilities/:name     deregister (404, 409 busy)
//   GET    /api/agent/identity               manifest hashes + registry
// Accepted upgrades run on the engine's worker pool; clients poll the job
// URL for the terminal status.
class ApiServer
{
  public:
    explicit ApiServer(Engine& engine);
    ~ApiServer();

    // Blocks serving requests; false if the port cannot be bound.
    bool listen(std::string const& host, int port);

    // Test support: bind an ephemeral port, serve on a background thread.
    int start_async(std::string const& host);
    void stop();

  private:
    void setup_routes();

    Engine& engine_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

} // namespace icand
