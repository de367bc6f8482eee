#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "bridgescope/registry.hpp"

namespace bs {

// JSON-RPC 2.0 dispatch over newline-delimited messages. Methods:
//   tools/list                          -> {"tools": [descriptor...]}
//   tools/call {name, arguments}        -> {"payload": ...}
// Tool failures map to JSON-RPC errors carrying the stable BridgeScope error
// code in error.data.error_code. Every request is answered exactly once with
// a matching id; calls within one session run strictly in arrival order.
class RpcEndpoint {
public:
    RpcEndpoint(ToolRegistry& registry, std::shared_ptr<Session> session)
        : registry_(registry), session_(std::move(session)) {}

    // nullopt for notifications (requests without an id)
    std::optional<json> handle_message(const json& request);
    std::optional<std::string> handle_line(const std::string& line);

    Session& session() { return *session_; }

private:
    ToolRegistry& registry_;
    std::shared_ptr<Session> session_;
};

// Serve one session over an istream/ostream pair (stdio transport).
void serve_stream(ToolRegistry& registry, std::shared_ptr<Session> session,
                  std::istream& in, std::ostream& out);

// Optional TCP listener: one session per accepted connection, all bound to
// the same database user. Blocks until the process is terminated.
void serve_tcp(ToolRegistry& registry, const std::string& user,
               const SecurityPolicy& policy, std::uint16_t port);

}  // namespace bs
