#pragma once

#include <string>

#include "bridgescope/privileges.hpp"
#include "bridgescope/session.hpp"

namespace bs {

// Server process configuration. Loaded from a JSON config file; connection
// secrets and the backend URL can be overridden via environment variables
// (BRIDGESCOPE_BACKEND_URL, BRIDGESCOPE_USER).
struct AppConfig {
    std::string backend_url = "memory:";  // "memory:" or "postgres://..."
    std::string user = "root";
    std::string policy_file;  // empty = permit-everything policy
    ServerConfig server;
};

AppConfig load_app_config(const std::string& path);  // throws on bad document
AppConfig apply_env_overrides(AppConfig config);
SecurityPolicy load_policy_file(const std::string& path);

}  // namespace bs
