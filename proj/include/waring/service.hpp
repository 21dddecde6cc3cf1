#pragma once

#include <cstdint>
#include <string>

namespace httplib {
class Server;
}

namespace waring::service {

struct Options {
    std::string static_dir;               ///< served at / when non-empty
    std::int64_t max_coverage_N = 200;    ///< larger requests get 413
    unsigned coverage_threads = 0;        ///< 0 = hardware concurrency
};

/// Default port: $WARING_PORT when set and valid, else 8080.
int default_port();

/// Registers /healthz and the /api endpoints on `server`.
void install_routes(httplib::Server& server, const Options& options);

/// Blocks serving on host:port.  Returns false if the socket cannot be bound.
bool serve(const std::string& host, int port, const Options& options);

}  // namespace waring::service
